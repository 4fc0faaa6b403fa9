#include "solspec/cli.hpp"

#include <iostream>

int main(int argc, char ** argv)
{
    return solspec::cli::run(argc, argv, std::cout, std::cerr);
}
