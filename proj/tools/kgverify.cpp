#include <iostream>

#include "kgdist/cli.hpp"

int main(int argc, char** argv) { return kgdist::run_cli(argc, argv, std::cout, std::cerr); }
