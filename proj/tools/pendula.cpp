#include <string>
#include <vector>

#include "pendula/experiment.hpp"

int main(int argc, char** argv) {
    return pendula::experiment::cli_main(std::vector<std::string>(argv + 1, argv + argc));
}
