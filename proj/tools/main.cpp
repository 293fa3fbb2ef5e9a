#include "hdsa/cli.hpp"

int main(int argc, char** argv) { return hdsa::cli_dispatch(argc, argv); }
