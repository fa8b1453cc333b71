#include <iostream>

#include "twopiece/cli.hpp"

int main(int argc, char** argv) { return twopiece::cli::run(argc, argv, std::cout, std::cerr); }
