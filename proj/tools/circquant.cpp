#include <iostream>

#include "circquant/cli.hpp"

int main(int argc, char** argv) { return circquant::cli::run(argc, argv, std::cout, std::cerr); }
