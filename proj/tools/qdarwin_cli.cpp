#include "qdarwin/cli/commands.hpp"

int main(int argc, char** argv) { return qdarwin::cli::run(argc, argv); }
