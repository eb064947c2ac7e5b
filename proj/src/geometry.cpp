#include "pindist/geometry.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "pindist/errors.hpp"
#include "pindist/kernels.hpp"
#include "pindist/parallel.hpp"

namespace pindist {

namespace {

// N <= |E|^3 must fit in 64 bits; 2642245^3 is the last safe cube.
constexpr std::uint64_t kCubeSafePoints = 2'642'245;

// Collects distinct residues: flat flags at small p, hashing above.
class ResidueCollector {
public:
    ResidueCollector(std::uint32_t p, std::size_t expected) {
        if (p <= kFlagLimit) {
            flags_.assign(p, 0);
        } else {
            hashed_.reserve(std::min<std::size_t>(2 * expected, std::size_t{1} << 22));
        }
    }

    void insert(Residue v) {
        if (!flags_.empty()) {
            if (!flags_[v]) {
                flags_[v] = 1;
                values_.push_back(v);
            }
        } else if (hashed_.insert(v).second) {
            values_.push_back(v);
        }
    }

    std::vector<Residue> sorted() && {
        std::sort(values_.begin(), values_.end());
        return std::move(values_);
    }

private:
    static constexpr std::uint32_t kFlagLimit = 1u << 24;

    std::vector<char> flags_;
    std::unordered_set<Residue> hashed_;
    std::vector<Residue> values_;
};

void require_nonempty(const PointSet2& e) {
    if (e.size() == 0) throw std::invalid_argument("empty point set");
}

void require_canonical(Point2 u, const PrimeModulus& m) {
    if (u.x >= m.value() || u.y >= m.value()) {
        throw std::invalid_argument("point coordinate out of range for p=" +
                                    std::to_string(m.value()));
    }
}

}  // namespace

std::vector<Residue> canonical_subset(std::vector<Residue> values, const PrimeModulus& m) {
    for (Residue v : values) {
        if (v >= m.value()) {
            throw std::invalid_argument("residue " + std::to_string(v) +
                                        " out of range for p=" + std::to_string(m.value()));
        }
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

PointSet2::PointSet2(std::vector<Point2> points, const PrimeModulus& m)
    : points_(std::move(points)), modulus_(m) {
    for (Point2 q : points_) require_canonical(q, m);
    std::sort(points_.begin(), points_.end());
    points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
}

PointSet2 PointSet2::cartesian(const std::vector<Residue>& a, const PrimeModulus& m) {
    std::vector<Residue> vals = canonical_subset(a, m);
    std::vector<Point2> pts;
    pts.reserve(vals.size() * vals.size());
    for (Residue x : vals) {
        for (Residue y : vals) pts.push_back({x, y});
    }
    return PointSet2(std::move(pts), m);
}

bool PointSet2::contains(Point2 q) const {
    return std::binary_search(points_.begin(), points_.end(), q);
}

std::uint64_t DistanceHistogram::total() const {
    std::uint64_t t = 0;
    for (const auto& [d, c] : counts) t += c;
    return t;
}

std::uint64_t DistanceHistogram::sum_of_squares() const {
    std::uint64_t t = 0;
    for (const auto& [d, c] : counts) t += static_cast<std::uint64_t>(c) * c;
    return t;
}

std::size_t DistanceHistogram::support_size() const { return counts.size(); }

PinScanResult pin_scan(const PointSet2& e, int threads) {
    require_nonempty(e);
    int t = resolve_threads(threads);
    if (t <= 1) return kernels::serial::pin_scan(e.points(), e.modulus());
    return kernels::omp::pin_scan(e.points(), e.modulus(), t);
}

std::vector<Residue> distance_set(const PointSet2& e, bool include_self) {
    require_nonempty(e);
    const auto& pts = e.points();
    const PrimeModulus& m = e.modulus();
    ResidueCollector seen(m.value(), pts.size());
    if (include_self) seen.insert(0);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            seen.insert(algebraic_distance(pts[i], pts[j], m));
        }
    }
    return std::move(seen).sorted();
}

std::vector<Residue> distance_set_cartesian(const std::vector<Residue>& a,
                                            const PrimeModulus& m) {
    std::vector<Residue> vals = canonical_subset(a, m);
    if (vals.empty()) throw std::invalid_argument("empty point set");
    ResidueCollector diff_acc(m.value(), vals.size() * vals.size());
    for (Residue x : vals) {
        for (Residue y : vals) diff_acc.insert(m.sub(x, y));
    }
    std::vector<Residue> diffs = std::move(diff_acc).sorted();
    ResidueCollector square_acc(m.value(), diffs.size());
    for (Residue d : diffs) square_acc.insert(m.mul(d, d));
    std::vector<Residue> squares = std::move(square_acc).sorted();
    ResidueCollector dist_acc(m.value(), squares.size() * squares.size());
    for (Residue s : squares) {
        for (Residue t : squares) dist_acc.insert(m.add(s, t));
    }
    return std::move(dist_acc).sorted();
}

std::vector<Residue> pinned_distance_set(const PointSet2& e, Point2 pin) {
    require_nonempty(e);
    require_canonical(pin, e.modulus());
    ResidueCollector seen(e.modulus().value(), e.size());
    for (Point2 v : e.points()) seen.insert(algebraic_distance(pin, v, e.modulus()));
    return std::move(seen).sorted();
}

DistanceHistogram distance_histogram(const PointSet2& e, Point2 pin) {
    require_nonempty(e);
    require_canonical(pin, e.modulus());
    DistanceHistogram h{pin, {}};
    for (Point2 v : e.points()) ++h.counts[algebraic_distance(pin, v, e.modulus())];
    return h;
}

std::uint64_t isosceles_count(const PointSet2& e, int threads, std::uint64_t max_points) {
    require_nonempty(e);
    if (e.size() > max_points || e.size() > kCubeSafePoints) {
        throw cap_exceeded("isosceles_count: |E| = " + std::to_string(e.size()) +
                           " exceeds the cap of " +
                           std::to_string(std::min(max_points, kCubeSafePoints)));
    }
    return pin_scan(e, threads).n_total;
}

std::uint64_t isosceles_count_bruteforce(const PointSet2& e, std::uint64_t max_points) {
    require_nonempty(e);
    if (e.size() > max_points) {
        throw cap_exceeded("isosceles_count_bruteforce: |E| = " + std::to_string(e.size()) +
                           " exceeds the cap of " + std::to_string(max_points));
    }
    const auto& pts = e.points();
    const PrimeModulus& m = e.modulus();
    std::uint64_t n = 0;
    for (Point2 u : pts) {
        for (Point2 v : pts) {
            Residue duv = algebraic_distance(u, v, m);
            for (Point2 w : pts) {
                if (algebraic_distance(u, w, m) == duv) ++n;
            }
        }
    }
    return n;
}

GuaranteedPin guaranteed_pin(const PointSet2& e, int threads) {
    require_nonempty(e);
    if (e.size() > kCubeSafePoints) {
        throw cap_exceeded("guaranteed_pin: |E|^3 would overflow at |E| = " +
                           std::to_string(e.size()));
    }
    PinScanResult scan = pin_scan(e, threads);
    std::uint64_t sz = e.size();
    std::uint64_t cube = sz * sz * sz;
    std::uint64_t g = std::gcd(cube, scan.n_total);
    return {scan.min_chi_pin, Rational{cube / g, scan.n_total / g}, scan.min_chi_support};
}

BestPin best_pin(const PointSet2& e, int threads) {
    require_nonempty(e);
    PinScanResult scan = pin_scan(e, threads);
    return {scan.best_pin, scan.best_size};
}

Line2 make_line(Residue a, Residue b, Residue c, const PrimeModulus& m) {
    if (a >= m.value() || b >= m.value() || c >= m.value()) {
        throw std::invalid_argument("line coefficient out of range for p=" +
                                    std::to_string(m.value()));
    }
    if (a == 0 && b == 0) throw std::invalid_argument("degenerate line: a = b = 0");
    if (a != 0) {
        Residue s = m.inv(a);
        return {1, m.mul(b, s), m.mul(c, s)};
    }
    return {0, 1, m.mul(c, m.inv(b))};
}

bool line_contains(const Line2& line, Point2 u, const PrimeModulus& m) {
    const std::uint32_t p = m.value();
    std::uint64_t lhs = static_cast<std::uint64_t>(line.a) * u.x % p +
                        static_cast<std::uint64_t>(line.b) * u.y % p;
    return lhs % p == line.c;
}

std::vector<Point2> line_points(const Line2& line, const PrimeModulus& m) {
    const std::uint32_t p = m.value();
    if (line.a == 0 && line.b == 0) throw std::invalid_argument("degenerate line: a = b = 0");
    std::vector<Point2> pts;
    pts.reserve(p);
    if (line.a != 0) {
        Residue ainv = m.inv(line.a);
        for (std::uint32_t y = 0; y < p; ++y) {
            Residue x = m.mul(m.sub(line.c, m.mul(line.b, static_cast<Residue>(y))), ainv);
            pts.push_back({x, static_cast<Residue>(y)});
        }
        std::sort(pts.begin(), pts.end());
    } else {
        Residue y = m.mul(line.c, m.inv(line.b));
        for (std::uint32_t x = 0; x < p; ++x) pts.push_back({static_cast<Residue>(x), y});
    }
    return pts;
}

Line2 bisector_line(Point2 v, Point2 w, const PrimeModulus& m) {
    require_canonical(v, m);
    require_canonical(w, m);
    if (v == w) {
        throw std::invalid_argument("bisector of equal points is the whole plane");
    }
    Residue a = m.mul(2, m.sub(w.x, v.x));
    Residue b = m.mul(2, m.sub(w.y, v.y));
    Residue nw = m.add(m.mul(w.x, w.x), m.mul(w.y, w.y));
    Residue nv = m.add(m.mul(v.x, v.x), m.mul(v.y, v.y));
    return make_line(a, b, m.sub(nw, nv), m);
}

std::vector<Line2> isotropic_lines_through_origin(const PrimeModulus& m) {
    auto roots = sqrt_mod(m.neg(1), m);
    if (!roots) return {};
    // Direction (1, i) spans the locus i*x - y = 0; make_line rescales it.
    std::vector<Line2> lines{make_line(roots->first, m.neg(1), 0, m),
                             make_line(roots->second, m.neg(1), 0, m)};
    std::sort(lines.begin(), lines.end());
    return lines;
}

}  // namespace pindist
