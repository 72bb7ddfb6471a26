#include <iostream>

#include "prpca/cli.hpp"

int main(int argc, char** argv) { return prpca::run_cli(argc, argv, std::cout, std::cerr); }
