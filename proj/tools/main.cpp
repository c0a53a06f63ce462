#include <iostream>
#include <string>
#include <vector>

#include "nsvi/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return nsvi::cli_run(args, std::cout, std::cerr);
}
