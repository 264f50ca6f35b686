#include "kirchhoff/cli.hpp"

int main(int argc, char** argv) { return kirchhoff::run(argc, argv); }
