#include <iostream>

#include "cvctx/cli.hpp"

int main(int argc, char** argv) { return cvctx::cli::run(argc, argv, std::cout, std::cerr); }
