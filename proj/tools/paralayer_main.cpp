#include "paralayer/cli.hpp"

int main(int argc, char** argv) { return paralayer::run_cli(argc, argv); }
