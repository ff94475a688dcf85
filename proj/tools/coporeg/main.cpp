// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#include "coporeg/cli.hpp"

int main(int argc, char** argv) { return coporeg::cli::cli_main(argc, argv); }
