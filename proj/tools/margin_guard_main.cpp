#include <iostream>
#include <string>
#include <vector>

#include "margin_guard/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return margin_guard::cli::run(args, std::cout, std::cerr);
}
