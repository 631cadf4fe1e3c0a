#include "rentropy/cli.hpp"

int main(int argc, char** argv) { return rentropy::cli_main(argc, argv); }
