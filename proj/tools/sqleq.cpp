#include <iostream>

#include "sqleq/cli/cli.hpp"

int main(int argc, char** argv) {
  return sqleq::cli::run(argc, argv, std::cout, std::cerr, sqleq::cli::process_env());
}
