#include <iostream>

#include "revbound/cli.hpp"

int main(int argc, char** argv) {
    return revbound::cli::run(argc, argv, std::cout, std::cerr);
}
