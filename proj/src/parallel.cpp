#include "plrec/parallel.hpp"

#include <cstdlib>
#include <cstring>

namespace plrec {

namespace {

bool initial_state() {
    // PLREC_SERIAL=1 forces the serial paths without rebuilding.
    const char* env = std::getenv("PLREC_SERIAL");
    if (env && std::strcmp(env, "0") != 0 && env[0] != '\0') return false;
    return true;
}

bool& state() {
    static bool on = initial_state();
    return on;
}

}  // namespace

bool parallel_enabled() { return state(); }

void set_parallel(bool on) { state() = on; }

int worker_count() {
#ifdef _OPENMP
    return parallel_enabled() ? omp_get_max_threads() : 1;
#else
    return 1;
#endif
}

}  // namespace plrec
