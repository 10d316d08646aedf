#include "cw/cli.hpp"

int main(int argc, char** argv) { return cw::main_entry(argc, argv); }
