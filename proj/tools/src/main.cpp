#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return draftvec::cli::cli_main(argc, argv, std::cout, std::cerr);
}
