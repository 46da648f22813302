#include <iostream>

#include "hesscap/cli.hpp"

int main(int argc, char** argv) { return hesscap::run_cli(argc, argv, std::cout, std::cerr); }
