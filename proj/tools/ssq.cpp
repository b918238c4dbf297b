#include <iostream>

#include "ssq/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ssq::run_cli(args, std::cout, std::cerr);
}
