#include "semgeo/service/cli.hpp"

int main(int argc, char** argv) { return semgeo::cli::run(argc, argv); }
