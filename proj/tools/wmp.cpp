#include <iostream>

#include "wmp/cli.hpp"

int main(int argc, char** argv) { return wmp::cli::run(argc, argv, std::cout, std::cerr); }
