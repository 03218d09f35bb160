#include "repsuff/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return repsuff::cli::run(argc, argv, std::cout, std::cerr);
}
