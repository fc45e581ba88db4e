#include <iostream>

#include "rioc/io/commands.hpp"

int main(int argc, char** argv) {
  return rioc::io::run_cli(argc, argv, std::cout, std::cerr);
}
