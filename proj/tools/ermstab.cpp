#include "ermstab/cli.hpp"

int main(int argc, char** argv) { return ermstab::cli::main(argc, argv); }
