#include <iostream>

#include "cpd/cli.hpp"

int main(int argc, char** argv) {
    return cpd::run_cli(argc, argv, std::cin, std::cout, std::cerr);
}
