#include "fko/cli.hpp"

int main(int argc, char** argv) { return fko::cli_dispatch(argc, argv); }
