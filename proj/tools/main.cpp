#include <iostream>

#include "banditmt/cli/commands.hpp"

int main(int argc, char **argv) { return banditmt::cli::run_cli(argc, argv, std::cout, std::cerr); }
