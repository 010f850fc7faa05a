#include <iostream>

#include "gammak/cli.hpp"

int main(int argc, char** argv) { return gammak::cli::run(argc, argv, std::cout, std::cerr); }
