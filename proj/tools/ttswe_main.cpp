#include "ttsw/harness.hpp"

int main(int argc, char** argv) { return ttsw::run_cli(argc, argv); }
