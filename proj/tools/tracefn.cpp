#include <iostream>

#include "tracefn/cli.hpp"

int main(int argc, char** argv) { return tracefn::dispatch(argc, argv, std::cout, std::cerr); }
