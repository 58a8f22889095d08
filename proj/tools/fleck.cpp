#include <iostream>

#include <fleck/cli.hpp>

int main(int argc, char** argv) { return fleck::cli::run(argc, argv, std::cout, std::cerr); }
