#include "commlab/cli.hpp"

int main(int argc, char** argv) { return commlab::cli::main_entry(argc, argv); }
