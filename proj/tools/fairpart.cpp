#include <iostream>
#include <string>
#include <vector>

#include "fairpart/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return fairpart::run_command(std::move(args), std::cout, std::cerr);
}
