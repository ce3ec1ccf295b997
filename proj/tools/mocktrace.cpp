#include <iostream>

#include "mocktrace/cli.hpp"

int main(int argc, char** argv) { return mocktrace::dispatch(argc, argv, std::cout, std::cerr); }
