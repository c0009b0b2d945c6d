#include <iostream>

#include "defjump/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return defjump::run_cli(args, std::cout, std::cerr);
}
