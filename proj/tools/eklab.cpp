#include "eklab/cli.hpp"

int main(int argc, char** argv) { return eklab::cli::dispatch(argc, argv); }
