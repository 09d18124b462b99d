#include "wordgrad/cli.hpp"

int main(int argc, char** argv) { return wordgrad::cli::run(argc, argv); }
