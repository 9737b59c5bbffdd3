#include "hydronozzle/commands.hpp"

int main(int argc, char** argv) { return hydronozzle::run_cli(argc, argv); }
