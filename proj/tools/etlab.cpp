#include "etlab/cli.hpp"

int main(int argc, char** argv) { return etlab::cli::run(argc, argv); }
