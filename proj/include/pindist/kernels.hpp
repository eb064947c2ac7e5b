#pragma once

#include <cstdint>
#include <vector>

#include "pindist/field.hpp"
#include "pindist/geometry.hpp"
#include "pindist/incidence.hpp"

// Hot counting loops, each in a serial reference form and an OpenMP form.
// Every pair must produce identical results for any thread count; the unit
// tests assert this and tools/bench_kernels compares their throughput.

namespace pindist::kernels {

namespace serial {

PinScanResult pin_scan(const std::vector<Point2>& points, const PrimeModulus& m);

std::uint64_t incidence_count_bucketed(const std::vector<Point3>& points,
                                       const std::vector<Plane>& planes,
                                       const PrimeModulus& m);

// Pair-keyed reference: canonicalizes the line through every point pair and
// inverts the per-line pair count. The omp twin uses a different (anchor)
// algorithm, so agreement between the two is a strong cross-check.
std::uint32_t max_collinear(const std::vector<Point3>& points, const PrimeModulus& m);

}  // namespace serial

namespace omp {

PinScanResult pin_scan(const std::vector<Point2>& points, const PrimeModulus& m, int threads);

std::uint64_t incidence_count_bucketed(const std::vector<Point3>& points,
                                       const std::vector<Plane>& planes,
                                       const PrimeModulus& m, int threads);

std::uint32_t max_collinear(const std::vector<Point3>& points, const PrimeModulus& m,
                            int threads);

}  // namespace omp

}  // namespace pindist::kernels
