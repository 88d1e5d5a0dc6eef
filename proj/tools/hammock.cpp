#include "hammock/cli.hpp"

int main(int argc, char** argv) { return hammock::cli::main(argc, argv); }
