#include "livingglobe/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return livingglobe::run_cli(argc, argv, std::cout, std::cerr);
}
