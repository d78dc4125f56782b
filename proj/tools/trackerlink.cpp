#include "trackerlink/cli/commands.hpp"

int main(int argc, char** argv) { return trackerlink::cli::run_cli(argc, argv); }
