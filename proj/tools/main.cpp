#include "emfrac/cli.hpp"

int main(int argc, char** argv) { return emfrac::run_cli(argc, argv); }
