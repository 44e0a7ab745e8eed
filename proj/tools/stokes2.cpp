#include "stokes2/cli.hpp"

int main(int argc, char** argv) { return stokes2::run_main(argc, argv); }
