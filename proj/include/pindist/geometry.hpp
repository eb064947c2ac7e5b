#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <vector>

#include "pindist/field.hpp"

namespace pindist {

struct Point2 {
    Residue x = 0;
    Residue y = 0;
    auto operator<=>(const Point2&) const = default;
};

// Sorted, deduplicated copy; rejects values outside [0, p).
std::vector<Residue> canonical_subset(std::vector<Residue> values, const PrimeModulus& m);

// The squared "distance" form (u1-v1)^2 + (u2-v2)^2 over F_p. Not a metric:
// it vanishes on isotropic directions when -1 is a square.
inline Residue algebraic_distance(Point2 u, Point2 v, const PrimeModulus& m) {
    const std::uint32_t p = m.value();
    std::uint32_t dx = u.x >= v.x ? u.x - v.x : u.x + p - v.x;
    std::uint32_t dy = u.y >= v.y ? u.y - v.y : u.y + p - v.y;
    std::uint64_t s = static_cast<std::uint64_t>(dx) * dx + static_cast<std::uint64_t>(dy) * dy;
    return static_cast<Residue>(s % p);
}

// A finite subset of F_p^2: deduplicated, sorted, coordinates canonical.
class PointSet2 {
public:
    PointSet2(std::vector<Point2> points, const PrimeModulus& m);

    // E = A x A. Values of A are validated and deduplicated.
    static PointSet2 cartesian(const std::vector<Residue>& a, const PrimeModulus& m);

    const std::vector<Point2>& points() const { return points_; }
    const PrimeModulus& modulus() const { return modulus_; }
    std::size_t size() const { return points_.size(); }
    bool contains(Point2 q) const;

private:
    std::vector<Point2> points_;
    PrimeModulus modulus_;
};

struct DistanceHistogram {
    Point2 pin;
    std::map<Residue, std::uint32_t> counts;  // only nonzero entries

    std::uint64_t total() const;        // = |E|
    std::uint64_t sum_of_squares() const;
    std::size_t support_size() const;   // = |Delta_pin(E)|
};

// The line {u : a*u1 + b*u2 = c}, stored with the first nonzero of (a, b)
// normalized to 1, so equal loci compare equal.
struct Line2 {
    Residue a = 0;
    Residue b = 0;
    Residue c = 0;
    auto operator<=>(const Line2&) const = default;
};

Line2 make_line(Residue a, Residue b, Residue c, const PrimeModulus& m);
bool line_contains(const Line2& line, Point2 u, const PrimeModulus& m);
// All p points of the line, sorted.
std::vector<Point2> line_points(const Line2& line, const PrimeModulus& m);

struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;  // reduced form, den >= 1
    bool operator==(const Rational&) const = default;
};

// One pass over all pins of E; everything the averaging argument needs.
struct PinScanResult {
    std::uint64_t n_total = 0;       // N = sum over pins of sum_x r_u(x)^2
    Point2 best_pin;                 // argmax |Delta_u|, lexicographic tie-break
    std::uint32_t best_size = 0;
    Point2 min_chi_pin;              // argmin sum_x r_u(x)^2, lexicographic tie-break
    std::uint64_t min_chi = 0;
    std::uint32_t min_chi_support = 0;  // |Delta_u| at the min-chi pin
    bool operator==(const PinScanResult&) const = default;
};

// threads = 0 means the library default (see parallel.hpp).
PinScanResult pin_scan(const PointSet2& e, int threads = 0);

// All pairwise distances, including the diagonal u = v (so 0 is always
// present) unless include_self is false. Sorted ascending.
std::vector<Residue> distance_set(const PointSet2& e, bool include_self = true);

// Distance set of A x A via {d1^2 + d2^2 : d1, d2 in A - A}; equals
// distance_set(PointSet2::cartesian(A)) at difference-set cost.
std::vector<Residue> distance_set_cartesian(const std::vector<Residue>& a, const PrimeModulus& m);

// The pin may lie outside E.
std::vector<Residue> pinned_distance_set(const PointSet2& e, Point2 pin);

DistanceHistogram distance_histogram(const PointSet2& e, Point2 pin);

// N = #{(u,v,w) in E^3 : ||u-v|| = ||u-w||} via the histogram identity,
// O(|E|^2). Throws cap_exceeded beyond max_points (uint64 safety bound).
std::uint64_t isosceles_count(const PointSet2& e, int threads = 0,
                              std::uint64_t max_points = 2'000'000);

// Reference oracle: enumerates all |E|^3 ordered triples.
std::uint64_t isosceles_count_bruteforce(const PointSet2& e, std::uint64_t max_points = 200);

struct GuaranteedPin {
    Point2 pin;            // in E, minimizes sum_x r_u(x)^2
    Rational bound;        // |E|^3 / N, reduced
    std::uint32_t pin_delta_size = 0;  // |Delta_pin(E)|, provably >= bound
};
GuaranteedPin guaranteed_pin(const PointSet2& e, int threads = 0);

struct BestPin {
    Point2 pin;
    std::uint32_t delta_size = 0;
};
BestPin best_pin(const PointSet2& e, int threads = 0);

// {u : 2u.(w - v) = |w|^2 - |v|^2}; membership is equivalent to
// ||u-v|| = ||u-w||. v = w is rejected (the locus is the whole plane).
Line2 bisector_line(Point2 v, Point2 w, const PrimeModulus& m);

// Empty when p = 3 (mod 4); the two lines through the origin with
// directions (1, i) and (1, -i) when p = 1 (mod 4). Sorted.
std::vector<Line2> isotropic_lines_through_origin(const PrimeModulus& m);

}  // namespace pindist
