#include "torus_nls/cli.hpp"

int main(int argc, char** argv) { return tnls::cli_main(argc, argv); }
