#include <iostream>
#include <vector>

#include "ionpulse/cli_commands.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ionpulse::cli::run(args, std::cout, std::cerr);
}
