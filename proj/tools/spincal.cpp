#include <iostream>

#include "spincal/cli.hpp"

int main(int argc, char** argv) { return spincal::cli::run(argc, argv, std::cout, std::cerr); }
