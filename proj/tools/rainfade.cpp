#include <iostream>
#include <string>
#include <vector>

#include "rainfade/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return rainfade::cli::run(std::move(args), std::cout, std::cerr);
}
