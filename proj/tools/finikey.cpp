#include <iostream>

#include "finikey/cli.hpp"

int main(int argc, char** argv) { return finikey::cli::run(argc, argv, std::cout, std::cerr); }
