#include "vdwtoda_cli/cli.hpp"

int main(int argc, char** argv) { return vdwtoda::cli::run_main(argc, argv); }
