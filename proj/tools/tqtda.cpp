#include "tqtda/cli.hpp"

int main(int argc, char** argv) { return tqtda::cli::run(argc, argv); }
