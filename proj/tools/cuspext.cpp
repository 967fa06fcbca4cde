#include "cuspext/cli.hpp"

int main(int argc, char** argv) { return cuspext::cli::run_cli(argc, argv); }
