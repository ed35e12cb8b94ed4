#include "rankfit/cli.hpp"

int main(int argc, char** argv) { return rankfit::cli_main(argc, argv); }
