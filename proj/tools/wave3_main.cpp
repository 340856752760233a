#include <iostream>
#include <vector>

#include "wave3/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return wave3::cli::run(args, std::cout, std::cerr);
}
