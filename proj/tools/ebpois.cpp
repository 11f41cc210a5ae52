#include <iostream>
#include <string>
#include <vector>

#include "ebpois/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return ebpois::run_cli(args, std::cout, std::cerr);
}
