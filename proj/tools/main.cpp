#include <iostream>

#include "cumbia/cli.hpp"

int main(int argc, char** argv) {
  return cumbia::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
