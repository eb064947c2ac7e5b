#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "pindist/field.hpp"

namespace pindist {

struct Point3 {
    Residue x = 0;
    Residue y = 0;
    Residue z = 0;
    auto operator<=>(const Point3&) const = default;
};

// The affine plane {x : n1*x1 + n2*x2 + x3 = c}. The third normal
// coordinate is fixed to 1, which makes the representation unique.
struct Plane {
    Residue n1 = 0;
    Residue n2 = 0;
    Residue c = 0;
    auto operator<=>(const Plane&) const = default;
};

inline bool plane_contains(const Plane& pl, Point3 q, const PrimeModulus& m) {
    std::uint64_t lhs = static_cast<std::uint64_t>(pl.n1) * q.x % m.value();
    lhs += static_cast<std::uint64_t>(pl.n2) * q.y % m.value();
    lhs += q.z;
    return lhs % m.value() == pl.c;
}

inline constexpr std::uint64_t kDefaultInstanceCap = 10'000'000;      // on |A|^3
inline constexpr std::uint64_t kDefaultNaiveCap = 1'000'000'000;      // on |P|*|Pi|
inline constexpr std::uint64_t kDefaultPairCap = 100'000'000;         // on |P|^2
inline constexpr std::uint64_t kDefaultRestrictedCap = 4'000'000'000; // on |A|^6
inline constexpr std::uint64_t kDefaultBucketCostCap = 4'000'000'000; // on groups*|P|

// P = {(2*u1, v2 - w2, w2^2 - v2^2) : u1, v2, w2 in A, v2 != w2}, sorted.
// Distinct by the (alpha - beta, alpha^2 - beta^2) injectivity argument in
// odd characteristic, so |P| = |A|^2 (|A| - 1).
std::vector<Point3> build_point_set(const std::vector<Residue>& a, const PrimeModulus& m,
                                    std::uint64_t cap = kDefaultInstanceCap);

// Pi = {(n1, n2, c) = (v1 - w1, 2*u2, v1^2 - w1^2) : u2, v1, w1 in A, v1 != w1}.
std::vector<Plane> build_plane_set(const std::vector<Residue>& a, const PrimeModulus& m,
                                   std::uint64_t cap = kDefaultInstanceCap);

struct IncidenceInstance {
    std::vector<Point3> points;   // sorted, distinct
    std::vector<Plane> planes;    // sorted, distinct
    PrimeModulus modulus;
    std::vector<Residue> source;  // the generating set A, sorted
};

// Builds both families and checks |P| = |Pi| = |A|^2 (|A| - 1).
IncidenceInstance build_instance(const std::vector<Residue>& a, const PrimeModulus& m,
                                 std::uint64_t cap = kDefaultInstanceCap);

// Reference oracle: tests every (point, plane) pair.
std::uint64_t count_incidences_naive(const IncidenceInstance& inst,
                                     std::uint64_t cap = kDefaultNaiveCap);

// Groups planes by (n1, n2); per group, histogram of n1*x + n2*y + z over P,
// then one lookup per plane constant. O(groups * |P| + |Pi|).
std::uint64_t count_incidences_bucketed(const IncidenceInstance& inst, int threads = 0,
                                        std::uint64_t cost_cap = kDefaultBucketCostCap);

// Maximum number of points of P on one line of F_p^3, by canonicalizing the
// line through every point pair. Returns |P| when |P| < 2.
std::uint32_t max_collinear(const std::vector<Point3>& points, const PrimeModulus& m,
                            std::uint64_t pair_cap = kDefaultPairCap, int threads = 0);

// #{(u,v,w) in (AxA)^3 : ||u-v|| = ||u-w||, v1 != w1, v2 != w2} by direct
// enumeration. The independent side of the incidence correspondence check.
std::uint64_t restricted_isosceles_count(const std::vector<Residue>& a, const PrimeModulus& m,
                                         std::uint64_t cap = kDefaultRestrictedCap);

// The complementary count (v1 = w1 or v2 = w2); at most 4|A|^4, and
// restricted + degenerate = isosceles_count(A x A).
std::uint64_t degenerate_case_count(const std::vector<Residue>& a, const PrimeModulus& m,
                                    std::uint64_t cap = kDefaultRestrictedCap);

struct RudnevRatio {
    std::uint64_t incidences = 0;
    std::uint64_t denominator = 0;  // floor(isqrt(|P|^3)) + k * |P|
    bool p_square_exceeded = false; // |P| > p^2: outside the theorem's hypothesis
    double value() const { return static_cast<double>(incidences) / static_cast<double>(denominator); }
};

// incidences / (|P|^{3/2} + k|P|) with the 3/2 power floored to an integer.
RudnevRatio rudnev_ratio(const IncidenceInstance& inst, std::uint64_t incidences, std::uint32_t k);
// Convenience form computing both inputs (bucketed count, pair-canonical k).
RudnevRatio rudnev_ratio(const IncidenceInstance& inst);

// Text export: "p=<p>", then "points <n>" with one "x y z" line each, then
// "planes <n>" with one "n1 n2 c" line each.
void write_instance(std::ostream& out, const IncidenceInstance& inst);
IncidenceInstance read_instance(std::istream& in);

// floor(sqrt(v)) for 128-bit arguments; |P|^3 overflows 64 bits well inside the caps.
std::uint64_t isqrt_u128(unsigned __int128 v);

}  // namespace pindist
