#include "cli.hpp"

int main(int argc, char** argv) { return separa::cli::run(argc, argv); }
