#include <iostream>
#include <string>
#include <vector>

#include "eigenlab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return eigenlab::cli::run(args, std::cout, std::cerr);
}
