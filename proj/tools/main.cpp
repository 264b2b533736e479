#include <iostream>
#include <string>
#include <vector>

#include "chronolex/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return chronolex::cli_main(args, std::cout, std::cerr);
}
