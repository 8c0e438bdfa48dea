// Command-line front end; see include/stagwave/cli.hpp.
#include "stagwave/cli.hpp"

int main(int argc, char** argv) { return stagwave::cli::run(argc, argv); }
