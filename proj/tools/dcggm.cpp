#include <iostream>
#include <string>
#include <vector>

#include "dcggm/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return dcggm::run_cli(args, std::cerr);
}
