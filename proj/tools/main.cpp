#include <iostream>
#include <string>
#include <vector>

#include "qcext/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return qcext::cli::run(args, std::cout, std::cerr);
}
