// SPDX-License-Identifier: Apache-2.0
#include "silent_tracker/cli.hpp"

#include <iostream>
#include <vector>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return silent_tracker::run_cli(args, std::cout, std::cerr);
}
