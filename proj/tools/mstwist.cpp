#include <iostream>

#include "mstwist/cli.hpp"

int main(int argc, char** argv) { return mstwist::cli::run(argc, argv, std::cout, std::cerr); }
