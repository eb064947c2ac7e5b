#pragma once

// Shared internals of the serial and OpenMP counting kernels.

#include <array>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pindist/field.hpp"
#include "pindist/geometry.hpp"
#include "pindist/incidence.hpp"

namespace pindist::kernels::detail {

// Dense scratch up to this modulus (4 MiB of counters), hashed beyond.
inline constexpr std::uint32_t kDenseLimit = 1u << 20;

class DenseCounter {
public:
    explicit DenseCounter(std::uint32_t p) : counts_(p, 0) {}
    void increment(Residue k) { ++counts_[k]; }
    std::uint32_t get(Residue k) const { return counts_[k]; }
    // Read and clear; duplicate keys in a touched list read 0 the second time.
    std::uint32_t take(Residue k) {
        std::uint32_t c = counts_[k];
        counts_[k] = 0;
        return c;
    }

private:
    std::vector<std::uint32_t> counts_;
};

class SparseCounter {
public:
    explicit SparseCounter(std::uint32_t) {}
    void increment(Residue k) { ++counts_[k]; }
    std::uint32_t get(Residue k) const {
        auto it = counts_.find(k);
        return it == counts_.end() ? 0 : it->second;
    }
    std::uint32_t take(Residue k) {
        auto it = counts_.find(k);
        if (it == counts_.end()) return 0;
        std::uint32_t c = it->second;
        counts_.erase(it);
        return c;
    }

private:
    std::unordered_map<Residue, std::uint32_t> counts_;
};

// chi_u = sum_x r_u(x)^2 and |Delta_u| for one pin.
template <class Counter>
std::pair<std::uint64_t, std::uint32_t> scan_pin(const Point2* pts, std::size_t n, Point2 u,
                                                 std::uint32_t p, Counter& counts,
                                                 std::vector<Residue>& touched) {
    touched.clear();
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t dx = u.x >= pts[i].x ? u.x - pts[i].x : u.x + p - pts[i].x;
        std::uint32_t dy = u.y >= pts[i].y ? u.y - pts[i].y : u.y + p - pts[i].y;
        auto d = static_cast<Residue>(
            (static_cast<std::uint64_t>(dx) * dx + static_cast<std::uint64_t>(dy) * dy) % p);
        counts.increment(d);
        touched.push_back(d);
    }
    std::uint64_t chi = 0;
    std::uint32_t support = 0;
    for (Residue d : touched) {
        std::uint32_t c = counts.take(d);
        if (c != 0) {
            chi += static_cast<std::uint64_t>(c) * c;
            ++support;
        }
    }
    return {chi, support};
}

// Combines per-pin results. merge() is order-independent, so parallel
// reductions give the same answer as the serial loop for any thread count.
struct PinAccum {
    bool any = false;
    std::uint64_t n_total = 0;
    Point2 best_pin{};
    std::uint32_t best_size = 0;
    Point2 min_pin{};
    std::uint64_t min_chi = std::numeric_limits<std::uint64_t>::max();
    std::uint32_t min_support = 0;

    void add(Point2 u, std::uint64_t chi, std::uint32_t support) {
        n_total += chi;
        if (!any || support > best_size || (support == best_size && u < best_pin)) {
            best_pin = u;
            best_size = support;
        }
        if (!any || chi < min_chi || (chi == min_chi && u < min_pin)) {
            min_pin = u;
            min_chi = chi;
            min_support = support;
        }
        any = true;
    }

    void merge(const PinAccum& o) {
        if (!o.any) return;
        n_total += o.n_total;
        if (!any || o.best_size > best_size || (o.best_size == best_size && o.best_pin < best_pin)) {
            best_pin = o.best_pin;
            best_size = o.best_size;
        }
        if (!any || o.min_chi < min_chi || (o.min_chi == min_chi && o.min_pin < min_pin)) {
            min_pin = o.min_pin;
            min_chi = o.min_chi;
            min_support = o.min_support;
        }
        any = true;
    }

    PinScanResult finish() const {
        return PinScanResult{n_total, best_pin, best_size, min_pin, min_chi, min_support};
    }
};

// Contiguous runs of equal (n1, n2) in a sorted plane family.
std::vector<std::pair<std::size_t, std::size_t>> plane_groups(const std::vector<Plane>& planes);

// Incidence contribution of one plane group against all points.
template <class Counter>
std::uint64_t count_group(const Plane* planes, std::size_t begin, std::size_t end,
                          const Point3* pts, std::size_t n, std::uint32_t p, Counter& counts,
                          std::vector<Residue>& touched) {
    touched.clear();
    const std::uint64_t n1 = planes[begin].n1;
    const std::uint64_t n2 = planes[begin].n2;
    for (std::size_t i = 0; i < n; ++i) {
        auto v = static_cast<Residue>((n1 * pts[i].x % p + n2 * pts[i].y % p + pts[i].z) % p);
        counts.increment(v);
        touched.push_back(v);
    }
    std::uint64_t total = 0;
    for (std::size_t j = begin; j < end; ++j) total += counts.get(planes[j].c);
    for (Residue v : touched) counts.take(v);
    return total;
}

// Residue inversion with an O(p) table below the dense limit.
class Inverter {
public:
    explicit Inverter(const PrimeModulus& m);
    Residue operator()(Residue a) const;

private:
    const PrimeModulus& m_;
    std::vector<Residue> table_;
};

// Direction of the line through two distinct points, scaled so its first
// nonzero coordinate is 1. a - b and b - a give the same key.
struct DirKey {
    std::array<Residue, 3> v{};
    bool operator==(const DirKey&) const = default;
};

struct DirKeyHash {
    std::size_t operator()(const DirKey& k) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (std::uint32_t x : k.v) {
            h ^= x;
            h *= 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

DirKey canonical_direction(Point3 a, Point3 b, const PrimeModulus& m, const Inverter& inv);

// Canonical key of the line through two distinct points: the canonical
// direction, then the unique point on the line whose pivot coordinate is 0.
struct LineKey {
    std::array<Residue, 6> v{};
    bool operator==(const LineKey&) const = default;
};

struct LineKeyHash {
    std::size_t operator()(const LineKey& k) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (std::uint32_t x : k.v) {
            h ^= x;
            h *= 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

LineKey canonical_line(Point3 a, Point3 b, const PrimeModulus& m, const Inverter& inv);

using LineCountMap = std::unordered_map<LineKey, std::uint64_t, LineKeyHash>;

// Largest point count among lines, from per-line unordered pair counts.
std::uint32_t collinearity_from_pairs(const LineCountMap& pair_counts);

}  // namespace pindist::kernels::detail
