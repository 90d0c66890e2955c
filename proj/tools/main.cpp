#include "hmplan/cli.hpp"

int main(int argc, char** argv) { return hmplan::run_cli(argc, argv); }
