#include <xibergman/cli.hpp>

int main(int argc, char** argv) { return xibergman::cli::run(argc, argv); }
