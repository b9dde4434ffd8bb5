#include <string>
#include <vector>

#include "nvlab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return nvlab::run_cli(args);
}
