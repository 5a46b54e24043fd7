#include <iostream>
#include <string>
#include <vector>

#include "gramlab/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return gramlab::run_main(args, std::cout, std::cerr);
}
