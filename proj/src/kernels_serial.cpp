#include "pindist/kernels.hpp"

#include "kernel_detail.hpp"
#include "pindist/errors.hpp"

namespace pindist::kernels {

namespace detail {

std::vector<std::pair<std::size_t, std::size_t>> plane_groups(const std::vector<Plane>& planes) {
    std::vector<std::pair<std::size_t, std::size_t>> groups;
    std::size_t i = 0;
    while (i < planes.size()) {
        std::size_t j = i + 1;
        while (j < planes.size() && planes[j].n1 == planes[i].n1 && planes[j].n2 == planes[i].n2)
            ++j;
        groups.emplace_back(i, j);
        i = j;
    }
    return groups;
}

Inverter::Inverter(const PrimeModulus& m) : m_(m) {
    const std::uint32_t p = m.value();
    if (p <= kDenseLimit) {
        table_.resize(p);
        table_[1] = 1;
        // inv(i) = -(p/i) * inv(p mod i)
        for (std::uint32_t i = 2; i < p; ++i) {
            table_[i] = static_cast<Residue>(
                p - static_cast<std::uint64_t>(p / i) * table_[p % i] % p);
        }
    }
}

Residue Inverter::operator()(Residue a) const {
    return table_.empty() ? m_.inv(a) : table_[a];
}

DirKey canonical_direction(Point3 a, Point3 b, const PrimeModulus& m, const Inverter& inv) {
    const std::uint32_t p = m.value();
    std::array<Residue, 3> pa{a.x, a.y, a.z};
    std::array<Residue, 3> pb{b.x, b.y, b.z};
    DirKey dir;
    for (int k = 0; k < 3; ++k) {
        dir.v[k] = pa[k] >= pb[k] ? pa[k] - pb[k] : pa[k] + p - pb[k];
    }
    int piv = dir.v[0] != 0 ? 0 : (dir.v[1] != 0 ? 1 : 2);
    Residue s = inv(dir.v[piv]);
    for (int k = 0; k < 3; ++k) dir.v[k] = m.mul(dir.v[k], s);
    return dir;
}

LineKey canonical_line(Point3 a, Point3 b, const PrimeModulus& m, const Inverter& inv) {
    const std::uint32_t p = m.value();
    DirKey dir = canonical_direction(a, b, m, inv);
    int piv = dir.v[0] == 1 ? 0 : (dir.v[1] == 1 ? 1 : 2);

    std::array<Residue, 3> pa{a.x, a.y, a.z};
    std::uint64_t t = pa[piv];
    LineKey key;
    for (int k = 0; k < 3; ++k) {
        key.v[k] = dir.v[k];
        key.v[3 + k] = m.sub(pa[k], static_cast<Residue>(t * dir.v[k] % p));
    }
    return key;
}

std::uint32_t collinearity_from_pairs(const LineCountMap& pair_counts) {
    std::uint64_t max_pairs = 0;
    for (const auto& [key, c] : pair_counts)
        if (c > max_pairs) max_pairs = c;
    // pairs = C(n, 2); invert for n
    auto n = static_cast<std::uint32_t>(
        (1 + isqrt_u128(1 + 8 * static_cast<unsigned __int128>(max_pairs))) / 2);
    if (static_cast<std::uint64_t>(n) * (n - 1) / 2 != max_pairs) {
        throw invariant_violation("line pair count is not a binomial number");
    }
    return n;
}

}  // namespace detail

namespace serial {

namespace {

template <class Counter>
PinScanResult pin_scan_impl(const std::vector<Point2>& pts, const PrimeModulus& m) {
    const std::uint32_t p = m.value();
    Counter counts(p);
    std::vector<Residue> touched;
    touched.reserve(pts.size());
    detail::PinAccum acc;
    for (const Point2& u : pts) {
        auto [chi, support] = detail::scan_pin(pts.data(), pts.size(), u, p, counts, touched);
        acc.add(u, chi, support);
    }
    return acc.finish();
}

template <class Counter>
std::uint64_t bucketed_impl(const std::vector<Point3>& pts, const std::vector<Plane>& planes,
                            const PrimeModulus& m) {
    auto groups = detail::plane_groups(planes);
    Counter counts(m.value());
    std::vector<Residue> touched;
    touched.reserve(pts.size());
    std::uint64_t total = 0;
    for (auto [b, e] : groups) {
        total += detail::count_group(planes.data(), b, e, pts.data(), pts.size(), m.value(),
                                     counts, touched);
    }
    return total;
}

}  // namespace

PinScanResult pin_scan(const std::vector<Point2>& points, const PrimeModulus& m) {
    return m.value() <= detail::kDenseLimit ? pin_scan_impl<detail::DenseCounter>(points, m)
                                            : pin_scan_impl<detail::SparseCounter>(points, m);
}

std::uint64_t incidence_count_bucketed(const std::vector<Point3>& points,
                                       const std::vector<Plane>& planes, const PrimeModulus& m) {
    return m.value() <= detail::kDenseLimit ? bucketed_impl<detail::DenseCounter>(points, planes, m)
                                            : bucketed_impl<detail::SparseCounter>(points, planes, m);
}

std::uint32_t max_collinear(const std::vector<Point3>& points, const PrimeModulus& m) {
    const std::size_t n = points.size();
    if (n < 2) return static_cast<std::uint32_t>(n);
    detail::Inverter inv(m);
    detail::LineCountMap pair_counts;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            ++pair_counts[detail::canonical_line(points[i], points[j], m, inv)];
        }
    }
    return detail::collinearity_from_pairs(pair_counts);
}

}  // namespace serial
}  // namespace pindist::kernels
