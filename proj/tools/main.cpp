#include <iostream>
#include <string>
#include <vector>

#include "vqi/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return vqi::cli::dispatch(args, std::cout, std::cerr);
}
