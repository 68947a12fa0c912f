#include "arrlie/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return arrlie::cli::main_entry(argc, argv, std::cout, std::cerr); }
