#include <iostream>
#include <string>
#include <vector>

#include "cutofflab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cutofflab::run_cli(args, std::cout, std::cerr);
}
