#include "cli.hpp"

int main(int argc, char** argv) { return infogeom::cli::main_entry(argc, argv); }
