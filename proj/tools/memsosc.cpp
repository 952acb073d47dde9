#include <iostream>

#include "memsosc/cli.hpp"

int main(int argc, char** argv) { return memsosc::run_cli(argc, argv, std::cout, std::cerr); }
