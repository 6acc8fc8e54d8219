#include <string>
#include <vector>

#include "bvlab/cli.hpp"

int main(int argc, char** argv) {
    return bvlab::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
