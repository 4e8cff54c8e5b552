#include <iostream>

#include "auditopt/cli/cli.hpp"

int main(int argc, char** argv) { return auditopt::cli::run(argc, argv, std::cout, std::cerr); }
