#include <iostream>

#include "topk/cli.hpp"

int main(int argc, char** argv) { return topk::run_cli(argc, argv, std::cout, std::cerr); }
