#include <iostream>

#include "wikibridge/cli.hpp"

int main(int argc, char** argv) { return wikibridge::cli::run(argc, argv, std::cout, std::cerr); }
