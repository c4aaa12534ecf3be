#include "rri/cli.hpp"

int main(int argc, char** argv) { return rri::run_cli(argc, argv); }
