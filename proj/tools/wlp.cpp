#include <iostream>

#include "wlp/cli.hpp"

int main(int argc, char** argv) {
    return wlp::cli::run(argc, argv, std::cout, std::cerr);
}
