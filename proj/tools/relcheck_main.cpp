#include <iostream>

#include "relcheck/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return relcheck::dispatch(args, std::cout, std::cerr);
}
