#include <iostream>
#include <string>
#include <vector>

#include "req2tc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return req2tc::cli::run_cli(args, std::cout, std::cerr);
}
