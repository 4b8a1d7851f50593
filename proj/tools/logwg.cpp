#include "logwg/cli.hpp"

int main(int argc, char** argv) { return logwg::run_command(argc, argv); }
