#include "qcext/hashing.hpp"

#include <cstdio>

namespace qcext {

std::string hex_digest(std::string_view text) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(text)));
  return buf;
}

}  // namespace qcext
