#include <iostream>
#include <string>
#include <vector>

#include "tcfft/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return tcfft::cli::run(args, std::cout, std::cerr);
}
