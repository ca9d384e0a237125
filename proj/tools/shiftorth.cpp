#include <iostream>

#include "shiftorth/cli/commands.hpp"

int main(int argc, char** argv) {
  return shiftorth::cli::run_cli(argc, argv, std::cout, std::cerr);
}
