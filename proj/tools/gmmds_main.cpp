#include <iostream>
#include <string>
#include <vector>

#include "gmmds/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return gmmds::cli::run(args, std::cout, std::cerr);
}
