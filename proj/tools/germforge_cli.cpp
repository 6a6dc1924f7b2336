#include "germforge/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return germforge::run_cli(argc, argv, std::cout, std::cerr); }
