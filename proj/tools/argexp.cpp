#include <iostream>

#include "argexp/cli.hpp"

int main(int argc, char** argv) { return argexp::run_cli(argc, argv, std::cout, std::cerr); }
