#include <cstdlib>
#include <iostream>

#include "netforge/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const char* seed = std::getenv("NETFORGE_SEED");
  return netforge::cli::run(args, std::cout, std::cerr, seed ? seed : "");
}
