#include "spde/cli.hpp"

int main(int argc, char** argv) { return spde::run_cli(argc, argv); }
