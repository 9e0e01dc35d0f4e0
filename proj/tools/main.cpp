#include "hazardgrid/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return hazardgrid::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
