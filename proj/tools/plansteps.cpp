#include "plansteps/cli.hpp"

int main(int argc, char** argv) { return plansteps::cli::run(argc, argv); }
