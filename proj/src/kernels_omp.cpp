#include "pindist/kernels.hpp"

#include <unordered_map>

#include "kernel_detail.hpp"

namespace pindist::kernels::omp {

namespace {

template <class Counter>
PinScanResult pin_scan_impl(const std::vector<Point2>& pts, const PrimeModulus& m, int threads) {
    const std::uint32_t p = m.value();
    const auto n = static_cast<std::int64_t>(pts.size());
    detail::PinAccum acc;
#pragma omp parallel num_threads(threads)
    {
        Counter counts(p);
        std::vector<Residue> touched;
        touched.reserve(pts.size());
        detail::PinAccum local;
#pragma omp for schedule(static) nowait
        for (std::int64_t i = 0; i < n; ++i) {
            auto [chi, support] =
                detail::scan_pin(pts.data(), pts.size(), pts[i], p, counts, touched);
            local.add(pts[i], chi, support);
        }
#pragma omp critical(pindist_pin_scan_merge)
        acc.merge(local);
    }
    return acc.finish();
}

template <class Counter>
std::uint64_t bucketed_impl(const std::vector<Point3>& pts, const std::vector<Plane>& planes,
                            const PrimeModulus& m, int threads) {
    auto groups = detail::plane_groups(planes);
    const auto g = static_cast<std::int64_t>(groups.size());
    std::uint64_t total = 0;
#pragma omp parallel num_threads(threads)
    {
        Counter counts(m.value());
        std::vector<Residue> touched;
        touched.reserve(pts.size());
        std::uint64_t local = 0;
#pragma omp for schedule(dynamic, 8) nowait
        for (std::int64_t gi = 0; gi < g; ++gi) {
            local += detail::count_group(planes.data(), groups[gi].first, groups[gi].second,
                                         pts.data(), pts.size(), m.value(), counts, touched);
        }
#pragma omp atomic
        total += local;
    }
    return total;
}

}  // namespace

PinScanResult pin_scan(const std::vector<Point2>& points, const PrimeModulus& m, int threads) {
    return m.value() <= detail::kDenseLimit
               ? pin_scan_impl<detail::DenseCounter>(points, m, threads)
               : pin_scan_impl<detail::SparseCounter>(points, m, threads);
}

std::uint64_t incidence_count_bucketed(const std::vector<Point3>& points,
                                       const std::vector<Plane>& planes, const PrimeModulus& m,
                                       int threads) {
    return m.value() <= detail::kDenseLimit
               ? bucketed_impl<detail::DenseCounter>(points, planes, m, threads)
               : bucketed_impl<detail::SparseCounter>(points, planes, m, threads);
}

// Anchor form: for each point, bucket the other points by canonical
// direction; a line with t points shows up as multiplicity t - 1 at any of
// its anchors. Keeps per-thread state to one small map, unlike the serial
// reference, which keys every pair by its full line.
std::uint32_t max_collinear(const std::vector<Point3>& points, const PrimeModulus& m,
                            int threads) {
    const auto n = static_cast<std::int64_t>(points.size());
    if (n < 2) return static_cast<std::uint32_t>(n);
    detail::Inverter inv(m);
    std::uint32_t best = 0;
#pragma omp parallel num_threads(threads) reduction(max : best)
    {
        std::unordered_map<detail::DirKey, std::uint32_t, detail::DirKeyHash> dirs;
        dirs.reserve(points.size());
#pragma omp for schedule(dynamic, 16)
        for (std::int64_t i = 0; i < n; ++i) {
            dirs.clear();
            for (std::int64_t j = 0; j < n; ++j) {
                if (j == i) continue;
                std::uint32_t c = ++dirs[detail::canonical_direction(points[i], points[j], m, inv)];
                if (c > best) best = c;
            }
        }
    }
    return best + 1;
}

}  // namespace pindist::kernels::omp
