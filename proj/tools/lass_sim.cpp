#include <iostream>

#include "lass/cli.hpp"

int main(int argc, char** argv) {
    return lass::run_cli(argc, argv, std::cout, std::cerr);
}
