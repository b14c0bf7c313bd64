#include "hawkes_mdl/cli.hpp"

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return hawkes_mdl::cli::dispatch(args, std::cout, std::cerr);
}
