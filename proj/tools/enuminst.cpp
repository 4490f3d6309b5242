#include <iostream>
#include <string>
#include <vector>

#include "enuminst/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return enuminst::run_cli(args, std::cout, std::cerr);
}
