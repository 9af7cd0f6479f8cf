#include <iostream>

#include "recall/cli.hpp"

int main(int argc, char** argv) { return recall::run_cli(argc, argv, std::cout, std::cerr); }
