#include "jacobiflow/cli.hpp"

int main(int argc, char **argv) { return jacobiflow::cli::run(argc, argv); }
