#include "compatlab/cli/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return compatlab::cli::run(argc, argv, std::cout, std::cerr); }
