#include <iostream>

#include "symuniv/cli.hpp"

int main(int argc, char** argv) { return symuniv::run_command(argc, argv, std::cout, std::cerr); }
