#include <iostream>

#include "solitonlab/cli.hpp"

int main(int argc, char** argv) { return solitonlab::run(argc, argv, std::cout, std::cerr); }
