#include "confed/cli.hpp"

int main(int argc, char** argv) { return confed::cli::run(argc, argv); }
