#include "signpipe/cli/app.hpp"

int main(int argc, char** argv) { return signpipe::cli::run_cli(argc, argv); }
