#include "wdbo/cli.hpp"

int main(int argc, char** argv) { return wdbo::cli::run_main(argc, argv); }
