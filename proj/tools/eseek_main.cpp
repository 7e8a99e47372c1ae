#include "eseek/cli_app.hpp"

int main(int argc, char** argv) { return eseek::cli::main(argc, argv); }
