#include <iostream>

#include "parmsurv/run.hpp"

int main(int argc, char** argv) { return parmsurv::run_main(argc, argv, std::cout, std::cerr); }
