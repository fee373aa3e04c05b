#include "twopoint/cli.hpp"

int main(int argc, char** argv) { return twopoint::cli::main(argc, argv); }
