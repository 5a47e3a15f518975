#include "hsum/cli.hpp"

int main(int argc, char** argv) { return hsum::cli::run_command(argc, argv); }
