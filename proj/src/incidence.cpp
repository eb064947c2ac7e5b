#include "pindist/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "pindist/errors.hpp"
#include "pindist/geometry.hpp"
#include "pindist/kernels.hpp"
#include "pindist/parallel.hpp"

namespace pindist {

namespace {

using u128 = unsigned __int128;

void check_family_budget(std::size_t n, std::uint64_t cap, const char* what) {
    if (n < 2) {
        throw std::invalid_argument(std::string(what) + " needs |A| >= 2, got " +
                                    std::to_string(n));
    }
    if (u128(n) * n * n > cap) {
        throw cap_exceeded(std::string(what) + ": |A|^3 = " + std::to_string(n) + "^3 exceeds " +
                           std::to_string(cap));
    }
}

void check_sixth_power_budget(std::size_t n, std::uint64_t cap, const char* what) {
    // Any 64-bit cap is blown long before n^6 could overflow the 128-bit check.
    u128 cube = u128(n) * n * n;
    if (n > 100'000 || cube * cube > cap) {
        throw cap_exceeded(std::string(what) + ": |A|^6 = " + std::to_string(n) + "^6 exceeds " +
                           std::to_string(cap));
    }
}

}  // namespace

std::vector<Point3> build_point_set(const std::vector<Residue>& a, const PrimeModulus& m,
                                    std::uint64_t cap) {
    std::vector<Residue> vals = canonical_subset(a, m);
    check_family_budget(vals.size(), cap, "build_point_set");
    std::vector<Point3> pts;
    pts.reserve(vals.size() * vals.size() * (vals.size() - 1));
    for (Residue u1 : vals) {
        Residue x = m.add(u1, u1);
        for (Residue v2 : vals) {
            for (Residue w2 : vals) {
                if (v2 == w2) continue;
                // The third coordinate carries w2^2 - v2^2, so that membership in a
                // plane of the companion family is literally the equal-distance
                // equation 2u.(v - w) = |v|^2 - |w|^2 rearranged onto one side.
                pts.push_back({x, m.sub(v2, w2), m.sub(m.mul(w2, w2), m.mul(v2, v2))});
            }
        }
    }
    std::sort(pts.begin(), pts.end());
    if (std::adjacent_find(pts.begin(), pts.end()) != pts.end()) {
        throw invariant_violation("point family has duplicate elements");
    }
    return pts;
}

std::vector<Plane> build_plane_set(const std::vector<Residue>& a, const PrimeModulus& m,
                                   std::uint64_t cap) {
    std::vector<Residue> vals = canonical_subset(a, m);
    check_family_budget(vals.size(), cap, "build_plane_set");
    std::vector<Plane> planes;
    planes.reserve(vals.size() * vals.size() * (vals.size() - 1));
    for (Residue u2 : vals) {
        Residue n2 = m.add(u2, u2);
        for (Residue v1 : vals) {
            for (Residue w1 : vals) {
                if (v1 == w1) continue;
                planes.push_back({m.sub(v1, w1), n2, m.sub(m.mul(v1, v1), m.mul(w1, w1))});
            }
        }
    }
    std::sort(planes.begin(), planes.end());
    if (std::adjacent_find(planes.begin(), planes.end()) != planes.end()) {
        throw invariant_violation("plane family has duplicate elements");
    }
    return planes;
}

IncidenceInstance build_instance(const std::vector<Residue>& a, const PrimeModulus& m,
                                 std::uint64_t cap) {
    std::vector<Residue> vals = canonical_subset(a, m);
    auto pts = build_point_set(vals, m, cap);
    auto planes = build_plane_set(vals, m, cap);
    std::uint64_t n = vals.size();
    std::uint64_t want = n * n * (n - 1);
    if (pts.size() != want || planes.size() != want) {
        throw invariant_violation("family size is not |A|^2 (|A| - 1): points " +
                                  std::to_string(pts.size()) + ", planes " +
                                  std::to_string(planes.size()) + ", expected " +
                                  std::to_string(want));
    }
    return {std::move(pts), std::move(planes), m, std::move(vals)};
}

std::uint64_t count_incidences_naive(const IncidenceInstance& inst, std::uint64_t cap) {
    if (u128(inst.points.size()) * inst.planes.size() > cap) {
        throw cap_exceeded("count_incidences_naive: " + std::to_string(inst.points.size()) +
                           " x " + std::to_string(inst.planes.size()) + " pairs exceed " +
                           std::to_string(cap));
    }
    std::uint64_t total = 0;
    for (const Point3& q : inst.points) {
        for (const Plane& pl : inst.planes) total += plane_contains(pl, q, inst.modulus);
    }
    return total;
}

std::uint64_t count_incidences_bucketed(const IncidenceInstance& inst, int threads,
                                        std::uint64_t cost_cap) {
    if (!std::is_sorted(inst.planes.begin(), inst.planes.end())) {
        throw std::invalid_argument("count_incidences_bucketed: plane family must be sorted");
    }
    std::uint64_t groups = 0;
    for (std::size_t i = 0; i < inst.planes.size(); ++i) {
        if (i == 0 || inst.planes[i].n1 != inst.planes[i - 1].n1 ||
            inst.planes[i].n2 != inst.planes[i - 1].n2) {
            ++groups;
        }
    }
    if (u128(groups) * inst.points.size() > cost_cap) {
        throw cap_exceeded("count_incidences_bucketed: " + std::to_string(groups) +
                           " groups x " + std::to_string(inst.points.size()) +
                           " points exceed " + std::to_string(cost_cap));
    }
    int t = resolve_threads(threads);
    if (t <= 1) {
        return kernels::serial::incidence_count_bucketed(inst.points, inst.planes,
                                                         inst.modulus);
    }
    return kernels::omp::incidence_count_bucketed(inst.points, inst.planes, inst.modulus, t);
}

std::uint32_t max_collinear(const std::vector<Point3>& points, const PrimeModulus& m,
                            std::uint64_t pair_cap, int threads) {
    if (points.size() < 2) return static_cast<std::uint32_t>(points.size());
    if (u128(points.size()) * points.size() > pair_cap) {
        throw cap_exceeded("max_collinear: |P|^2 = " + std::to_string(points.size()) +
                           "^2 exceeds " + std::to_string(pair_cap));
    }
    std::vector<Point3> sorted = points;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("max_collinear: duplicate points");
    }
    // Always the anchor kernel: unlike the other kernel pairs, the serial
    // form here is a genuinely different (pair-keyed) algorithm kept as a
    // cross-check, and the anchor form wins even on one thread.
    return kernels::omp::max_collinear(points, m, resolve_threads(threads));
}

std::uint64_t restricted_isosceles_count(const std::vector<Residue>& a, const PrimeModulus& m,
                                         std::uint64_t cap) {
    std::vector<Residue> vals = canonical_subset(a, m);
    if (vals.empty()) throw std::invalid_argument("empty set");
    check_sixth_power_budget(vals.size(), cap, "restricted_isosceles_count");
    std::uint64_t total = 0;
    for (Residue v1 : vals) {
        for (Residue w1 : vals) {
            if (v1 == w1) continue;
            for (Residue v2 : vals) {
                for (Residue w2 : vals) {
                    if (v2 == w2) continue;
                    Point2 v{v1, v2};
                    Point2 w{w1, w2};
                    for (Residue u1 : vals) {
                        for (Residue u2 : vals) {
                            Point2 u{u1, u2};
                            if (algebraic_distance(u, v, m) == algebraic_distance(u, w, m)) {
                                ++total;
                            }
                        }
                    }
                }
            }
        }
    }
    return total;
}

std::uint64_t degenerate_case_count(const std::vector<Residue>& a, const PrimeModulus& m,
                                    std::uint64_t cap) {
    std::vector<Residue> vals = canonical_subset(a, m);
    if (vals.empty()) throw std::invalid_argument("empty set");
    check_sixth_power_budget(vals.size(), cap, "degenerate_case_count");
    std::uint64_t total = 0;
    for (Residue v1 : vals) {
        for (Residue w1 : vals) {
            for (Residue v2 : vals) {
                for (Residue w2 : vals) {
                    if (v1 != w1 && v2 != w2) continue;
                    Point2 v{v1, v2};
                    Point2 w{w1, w2};
                    for (Residue u1 : vals) {
                        for (Residue u2 : vals) {
                            Point2 u{u1, u2};
                            if (algebraic_distance(u, v, m) == algebraic_distance(u, w, m)) {
                                ++total;
                            }
                        }
                    }
                }
            }
        }
    }
    return total;
}

RudnevRatio rudnev_ratio(const IncidenceInstance& inst, std::uint64_t incidences,
                         std::uint32_t k) {
    const std::uint64_t n = inst.points.size();
    std::uint64_t den = isqrt_u128(u128(n) * n * n) + static_cast<std::uint64_t>(k) * n;
    const std::uint64_t p = inst.modulus.value();
    bool exceeded = u128(n) > u128(p) * p;
    return {incidences, den, exceeded};
}

RudnevRatio rudnev_ratio(const IncidenceInstance& inst) {
    std::uint64_t inc = count_incidences_bucketed(inst);
    std::uint32_t k = max_collinear(inst.points, inst.modulus);
    return rudnev_ratio(inst, inc, k);
}

void write_instance(std::ostream& out, const IncidenceInstance& inst) {
    out << "p=" << inst.modulus.value() << '\n';
    out << "points " << inst.points.size() << '\n';
    for (const Point3& q : inst.points) out << q.x << ' ' << q.y << ' ' << q.z << '\n';
    out << "planes " << inst.planes.size() << '\n';
    for (const Plane& pl : inst.planes) out << pl.n1 << ' ' << pl.n2 << ' ' << pl.c << '\n';
}

namespace {

Residue read_residue(std::istream& in, const PrimeModulus& m, const char* what) {
    std::uint64_t v = 0;
    if (!(in >> v)) {
        throw std::invalid_argument(std::string("instance file: truncated or malformed ") +
                                    what);
    }
    if (v >= m.value()) {
        throw std::invalid_argument("instance file: " + std::string(what) + " value " +
                                    std::to_string(v) + " out of range for p=" +
                                    std::to_string(m.value()));
    }
    return static_cast<Residue>(v);
}

std::size_t read_count(std::istream& in, const char* tag) {
    std::string word;
    std::uint64_t n = 0;
    if (!(in >> word) || word != tag || !(in >> n)) {
        throw std::invalid_argument(std::string("instance file: expected '") + tag +
                                    " <count>'");
    }
    return static_cast<std::size_t>(n);
}

}  // namespace

IncidenceInstance read_instance(std::istream& in) {
    std::string header;
    if (!(in >> header) || header.rfind("p=", 0) != 0) {
        throw std::invalid_argument("instance file: expected 'p=<prime>' header");
    }
    std::uint64_t p = 0;
    try {
        std::size_t used = 0;
        p = std::stoull(header.substr(2), &used);
        if (used != header.size() - 2) throw std::invalid_argument("trailing junk");
    } catch (const std::exception&) {
        throw std::invalid_argument("instance file: bad prime '" + header.substr(2) + "'");
    }
    if (p >= (1ull << 31)) {
        throw std::invalid_argument("instance file: prime " + std::to_string(p) +
                                    " exceeds 2^31-1");
    }
    PrimeModulus m(static_cast<std::uint32_t>(p));

    std::size_t n_points = read_count(in, "points");
    std::vector<Point3> pts;
    pts.reserve(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        Residue x = read_residue(in, m, "point");
        Residue y = read_residue(in, m, "point");
        Residue z = read_residue(in, m, "point");
        pts.push_back({x, y, z});
    }
    std::size_t n_planes = read_count(in, "planes");
    std::vector<Plane> planes;
    planes.reserve(n_planes);
    for (std::size_t i = 0; i < n_planes; ++i) {
        Residue n1 = read_residue(in, m, "plane");
        Residue n2 = read_residue(in, m, "plane");
        Residue c = read_residue(in, m, "plane");
        planes.push_back({n1, n2, c});
    }
    std::sort(pts.begin(), pts.end());
    if (std::adjacent_find(pts.begin(), pts.end()) != pts.end()) {
        throw std::invalid_argument("instance file: duplicate point");
    }
    std::sort(planes.begin(), planes.end());
    if (std::adjacent_find(planes.begin(), planes.end()) != planes.end()) {
        throw std::invalid_argument("instance file: duplicate plane");
    }
    return {std::move(pts), std::move(planes), m, {}};
}

std::uint64_t isqrt_u128(unsigned __int128 v) {
    if (v == 0) return 0;
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    long double s = std::sqrt(static_cast<long double>(v));
    // Clamp before converting: the estimate can land past 2^64 - 1.
    std::uint64_t r = s >= static_cast<long double>(kMax) ? kMax : static_cast<std::uint64_t>(s);
    while (r > 0 && u128(r) * r > v) --r;
    while (r < kMax && u128(r + 1) * (r + 1) <= v) ++r;
    return r;
}

}  // namespace pindist
