#include <iostream>

#include "smellsift/pipeline.hpp"

int main(int argc, char** argv) { return smellsift::run_cli(argc, argv, std::cout, std::cerr); }
