#include <iostream>

#include "mdcf/cli/commands.hpp"

int main(int argc, char** argv)
{
    return mdcf::cli::run_cli(argc, argv, std::cout, std::cerr);
}
