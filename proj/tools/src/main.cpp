#include <iostream>
#include <string>
#include <vector>

#include "torfol_cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return torfol_cli::run(std::move(args), std::cout, std::cerr);
}
