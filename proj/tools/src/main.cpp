#include <iostream>

#include "chaosrng/cli/commands.hpp"

int main(int argc, char** argv) { return chaosrng::cli::run(argc, argv, std::cout, std::cerr); }
