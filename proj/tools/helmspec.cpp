#include <iostream>

#include "helmspec/cli.hpp"

int main(int argc, char** argv) { return helmspec::cli::run(argc, argv, std::cout, std::cerr); }
