// symbisim: symbolic minimization and bisimilarity checks from the shell.
#include "symbisim/cli.h"

#include <iostream>

int main(int argc, char **argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return symbisim::cli::run(args, std::cout, std::cerr);
}
