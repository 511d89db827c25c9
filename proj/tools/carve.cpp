#include <iostream>

#include "carve/cli.hpp"

int main(int argc, char** argv) { return carve::cli_main(argc, argv, std::cout, std::cerr); }
