#include "evid/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return evid::cli::main(argc, argv, std::cout, std::cerr); }
