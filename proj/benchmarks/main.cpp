#include <benchmark/benchmark.h>

// Own main: the distribution's benchmark_main archive carries LTO bytecode
// tied to one compiler patch release.
BENCHMARK_MAIN();
