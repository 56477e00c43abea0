#include <iostream>

#include "dplab/cli/commands.hpp"

int main(int argc, char** argv) {
  return dplab::cli::run(argc, argv, std::cout, std::cerr);
}
