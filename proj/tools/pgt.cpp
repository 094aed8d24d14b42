#include "pgt/cli.hpp"

int main(int argc, char** argv) { return pgt::cli::run(argc, argv); }
