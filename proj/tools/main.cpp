#include <iostream>

#include "bautin/cli.hpp"

int main(int argc, char** argv) { return bautin::cli::main_entry(argc, argv, std::cout, std::cerr); }
