#include <iostream>
#include <string>
#include <vector>

#include "ndpolar/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv, argv + argc);
    return ndpolar::run_cli(args, std::cout, std::cerr);
}
