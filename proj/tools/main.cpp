#include <iostream>

#include "simorder/cli.hpp"

int main(int argc, char** argv) { return simorder::run_cli(argc, argv, std::cout, std::cerr); }
