#include "scanlab/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return scanlab::cli::dispatch(argc, argv, std::cout, std::cerr);
}
