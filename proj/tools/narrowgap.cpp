#include "narrowgap/cli.hpp"

int main(int argc, char** argv) { return narrowgap::run_cli(argc, argv); }
