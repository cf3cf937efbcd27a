#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace qcext {

/// 64-bit FNV-1a.
constexpr std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// FNV-1a digest as 16 lowercase hex digits.
std::string hex_digest(std::string_view text);

}  // namespace qcext
