#include "confuse/cli/run.hpp"

int main(int argc, char** argv) { return confuse::cli::run(argc, argv); }
