#include <iostream>
#include <string>
#include <vector>

#include "cartanlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cartanlab::execute(args, std::cout, std::cerr);
}
