#include <iostream>

#include "windsim/commands.hpp"

int main(int argc, char** argv) { return windsim::run_cli(argc, argv, std::cout, std::cerr); }
