// Times each serial kernel against its OpenMP twin on one mid-sized workload
// and cross-checks both against the slow oracles first. Usage:
//
//   bench_kernels [pin_size] [incidence_size] [threads]
//
// pin_size is |A| for the pin scan (E = A x A), incidence_size is |A| for the
// point-plane instance. threads defaults to the thread budget.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "pindist/experiments.hpp"
#include "pindist/field.hpp"
#include "pindist/geometry.hpp"
#include "pindist/incidence.hpp"
#include "pindist/kernels.hpp"
#include "pindist/parallel.hpp"

namespace {

using namespace pindist;
using Clock = std::chrono::steady_clock;

template <typename F>
double time_ms(F&& run) {
    auto t0 = Clock::now();
    run();
    auto t1 = Clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const std::string& name, double serial_ms, double omp_ms, bool agree) {
    std::printf("%-22s %10.1f ms %10.1f ms   x%-5.2f %s\n", name.c_str(), serial_ms, omp_ms,
                omp_ms > 0 ? serial_ms / omp_ms : 0.0, agree ? "match" : "MISMATCH");
    if (!agree) std::exit(3);
}

std::vector<Residue> interval(std::uint32_t n) {
    std::vector<Residue> a(n);
    std::iota(a.begin(), a.end(), 0u);
    return a;
}

}  // namespace

int main(int argc, char** argv) {
    std::uint32_t pin_size = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 96;
    std::uint32_t inc_size = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 20;
    int threads = argc > 3 ? std::atoi(argv[3]) : thread_budget();
    if (pin_size < 2 || inc_size < 2 || threads < 1) {
        std::cerr << "usage: bench_kernels [pin_size>=2] [incidence_size>=2] [threads>=1]\n";
        return 1;
    }

    PrimeModulus m(999983);
    std::cout << "p=" << m.value() << " pin |A|=" << pin_size << " incidence |A|=" << inc_size
              << " threads=" << threads << "\n\n";

    // Oracle pass on small inputs before trusting either kernel.
    {
        PointSet2 small = PointSet2::cartesian(interval(12), m);
        PinScanResult scan = kernels::serial::pin_scan(small.points(), m);
        std::uint64_t brute = isosceles_count_bruteforce(small);
        if (scan.n_total != brute) {
            std::cerr << "pin_scan disagrees with brute force: " << scan.n_total << " vs "
                      << brute << '\n';
            return 3;
        }
        IncidenceInstance inst = build_instance(interval(8), m);
        std::uint64_t fast = kernels::serial::incidence_count_bucketed(inst.points, inst.planes, m);
        std::uint64_t naive = count_incidences_naive(inst);
        if (fast != naive) {
            std::cerr << "bucketed count disagrees with naive: " << fast << " vs " << naive
                      << '\n';
            return 3;
        }
        std::cout << "oracle pass: pin_scan == brute force, bucketed == naive\n\n";
    }

    std::printf("%-22s %13s %13s   %-6s\n", "kernel", "serial", "omp", "ratio");

    {
        PointSet2 e = PointSet2::cartesian(interval(pin_size), m);
        PinScanResult rs, ro;
        double ts = time_ms([&] { rs = kernels::serial::pin_scan(e.points(), m); });
        double to = time_ms([&] { ro = kernels::omp::pin_scan(e.points(), m, threads); });
        report("pin_scan", ts, to, rs == ro);
    }

    IncidenceInstance inst = build_instance(interval(inc_size), m);
    {
        std::uint64_t cs = 0, co = 0;
        double ts = time_ms(
            [&] { cs = kernels::serial::incidence_count_bucketed(inst.points, inst.planes, m); });
        double to = time_ms([&] {
            co = kernels::omp::incidence_count_bucketed(inst.points, inst.planes, m, threads);
        });
        report("incidence_bucketed", ts, to, cs == co);
    }
    {
        std::uint32_t ks = 0, ko = 0;
        double ts = time_ms([&] { ks = kernels::serial::max_collinear(inst.points, m); });
        double to = time_ms([&] { ko = kernels::omp::max_collinear(inst.points, m, threads); });
        report("max_collinear", ts, to, ks == ko);
    }
    return 0;
}
