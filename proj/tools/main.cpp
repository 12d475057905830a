#include <vector>
#include <string>

#include "swelab/experiments.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return swelab::experiments::run_cli(args);
}
