#include <iostream>

#include "kslab_app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return kslab::run(args, std::cout, std::cerr);
}
