#include "opsplit/cli/commands.hpp"

int main(int argc, char** argv) { return opsplit::cli::run_cli(argc, argv); }
