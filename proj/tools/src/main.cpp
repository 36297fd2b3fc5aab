#include <iostream>

#include "tchm_cli/cli.hpp"

int main(int argc, char** argv) { return tchm::cli::run(argc, argv, std::cout, std::cerr); }
