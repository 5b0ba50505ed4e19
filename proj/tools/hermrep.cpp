#include "hermrep/cli.hpp"

int main(int argc, char** argv) { return hermrep::cli::run_command(argc, argv); }
