#include <iostream>
#include <string>
#include <vector>

#include "mmn/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mmn::cli::run(args, std::cout, std::cerr);
}
