#include "negbench/cli/cli.hpp"

int main(int argc, char** argv) { return negbench::cli::run(argc, argv); }
