#include "dtstc/cli.hpp"

int main(int argc, char **argv) { return dtstc::parse_and_dispatch(argc, argv); }
