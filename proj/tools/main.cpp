#include <iostream>

#include "sandlab/toolkit_io.hpp"

int main(int argc, char** argv) { return sandlab::cli_main(argc, argv, std::cout, std::cerr); }
