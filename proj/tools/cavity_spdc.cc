#include "cavityspdc/cli.hh"

int main(int argc, char** argv) { return spdc::cli::run(argc, argv); }
