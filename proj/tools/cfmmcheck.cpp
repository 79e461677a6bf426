#include "cfmm/cli.hpp"

int main(int argc, char** argv) { return cfmm::run_command(argc, argv); }
