#include <iostream>
#include <string>
#include <vector>

#include "quadconj/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return quadconj::cli::run(args, std::cout, std::cerr);
}
