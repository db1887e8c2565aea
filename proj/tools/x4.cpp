#include <iostream>
#include <string>
#include <vector>

#include "x4/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return x4::cli::run(args, std::cin, std::cout, std::cerr);
}
