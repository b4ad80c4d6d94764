#include <iostream>

#include "saddlekit/cli.hpp"

int main(int argc, char** argv) { return saddlekit::cli_main(argc, argv, std::cout, std::cerr); }
