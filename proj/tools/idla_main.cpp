#include "idla/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return idla::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
