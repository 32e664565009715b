#include <iostream>

#include "twodiv/cli.hpp"

int main(int argc, char** argv) { return twodiv::cli::run(argc, argv, std::cout, std::cerr); }
