#include "spdgeo/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return spdgeo::cli::run(argc, argv, std::cout, std::cerr); }
