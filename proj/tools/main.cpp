#include "cli.hpp"

int main(int argc, char** argv) { return rootlab::cli::run(argc, argv); }
