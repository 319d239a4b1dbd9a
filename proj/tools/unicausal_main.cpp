#include <iostream>

#include "unicausal/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return unicausal::cli::run(args, std::cout);
}
