#include <iostream>

#include "cqpolar/cli.hpp"

int main(int argc, char** argv) { return cqpolar::run_cli(argc, argv, std::cout, std::cerr); }
