#include "commands.hpp"

int main(int argc, char** argv) { return covert_mimo::cli::run(argc, argv); }
