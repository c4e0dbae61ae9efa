#include "navevo/harness.hpp"

int main(int argc, char** argv) { return navevo::harness::cli_main(argc, argv); }
