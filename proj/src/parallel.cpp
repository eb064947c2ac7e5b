#include "pindist/parallel.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pindist {

int thread_budget() {
#ifdef _OPENMP
    int n = omp_get_max_threads();
#else
    int n = 1;
#endif
    if (const char* env = std::getenv("PINDIST_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1) {
            throw std::invalid_argument("PINDIST_THREADS must be a positive integer, got '" +
                                        std::string(env) + "'");
        }
        if (v < n) n = static_cast<int>(v);
    }
    return n < 1 ? 1 : n;
}

int resolve_threads(int request) {
    // An explicit request is honored even beyond the core count; results are
    // identical for any team size, so this only matters for testing.
    return request <= 0 ? thread_budget() : request;
}

}  // namespace pindist
