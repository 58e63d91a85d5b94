#include "crapper/cli.hpp"

int main(int argc, char** argv) { return crapper::run_command(argc, argv); }
