#include <iostream>

#include "soliton/cli.hpp"

int main(int argc, char** argv) { return soliton::cli::parse_and_dispatch(argc, argv, std::cout, std::cerr); }
