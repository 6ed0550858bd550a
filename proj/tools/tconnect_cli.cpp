#include "tconnect/cli.hpp"

int main(int argc, char** argv) { return tconnect::cli::run(argc, argv); }
