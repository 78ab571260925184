#include <iostream>

#include "dla/cli.hpp"

int main(int argc, char** argv) { return dla::cli::run(argc, argv, std::cout, std::cerr); }
