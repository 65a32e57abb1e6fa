// Command-line entry point; the subcommands live in diskharm/cli.hpp.
#include "diskharm/cli.hpp"

int main(int argc, char** argv) { return diskharm::cli::run(argc, argv); }
