#include <iostream>

#include "pathoam/cli.hpp"

int main(int argc, char** argv) {
  return pathoam::cli::main_with_args(argc, argv, std::cin, std::cout, std::cerr);
}
