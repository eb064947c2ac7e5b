#pragma once

namespace pindist {

// Worker count for the parallel kernels: the OpenMP default, capped by the
// PINDIST_THREADS environment variable when set. Always >= 1. A set but
// malformed PINDIST_THREADS throws std::invalid_argument.
int thread_budget();

// Resolves an explicit request: 0 means thread_budget(), anything else is
// clamped to [1, request].
int resolve_threads(int request);

}  // namespace pindist
