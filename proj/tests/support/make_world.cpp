// Writes the planted world into a directory, for manual runs and the Python tests.
#include <iostream>

#include "support/world.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: tl_make_world <dir>\n";
    return 2;
  }
  auto p = tl_world::write_world(argv[1], TL_FIXTURES);
  std::cout << p.config_2019.string() << "\n" << p.config_2021.string() << "\n" << p.config_history.string() << "\n";
  return 0;
}
