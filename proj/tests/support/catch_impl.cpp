// Compiles the Catch2 amalgamated implementation (including its default
// main) exactly once for the test binaries.
#include <catch2/catch_amalgamated.cpp>
