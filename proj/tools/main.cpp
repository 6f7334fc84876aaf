#include "conedyn/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return conedyn::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
