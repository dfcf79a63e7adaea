#include "flucast/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return flucast::cli::run_cli(argc, argv, std::cout, std::cerr);
}
