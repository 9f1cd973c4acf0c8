#include "osskg/cli/cli.hpp"

int main(int argc, char** argv) { return osskg::cli::run_cli(argc, argv); }
