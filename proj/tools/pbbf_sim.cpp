#include <iostream>

#include "pbbf/cli.hpp"

int main(int argc, char** argv)
{
    return pbbf::run_cli(argc, argv, std::cout, std::cerr);
}
