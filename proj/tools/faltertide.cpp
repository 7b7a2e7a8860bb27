#include "faltertide/cli.hpp"

int main(int argc, char** argv) { return faltertide::cli::run(argc, argv); }
