#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pindist/field.hpp"
#include "pindist/geometry.hpp"
#include "pindist/incidence.hpp"

namespace pindist {

enum class GenKind {
    interval,                // {0, 1, ..., size-1}
    arithmetic_progression,  // ap:start:step
    geometric_progression,   // gp:base:ratio
    random_subset,           // random (uniform distinct residues, seeded)
    explicit_list,           // list:v1:v2:...
    isotropic_line_section,  // iso; {0..size-1}, valid only when p = 1 (mod 4)
};

// Parsed form of the shell grammar kind[:param:param...].
struct GenSpec {
    GenKind kind = GenKind::interval;
    std::vector<std::int64_t> params;
    bool operator==(const GenSpec&) const = default;
};

GenSpec parse_gen_spec(const std::string& text);
std::string to_string(const GenSpec& spec);

// Deterministic for fixed (spec, seed, p); returns exactly `size` distinct
// residues or throws std::invalid_argument when the kind cannot reach that
// size (geometric progressions cycle, sections need p = 1 mod 4, ...).
std::vector<Residue> generate_set(const GenSpec& spec, std::uint32_t size,
                                  const PrimeModulus& m, std::uint64_t seed = 0);

// Per-case work limits. Stages that would exceed a cap leave their report
// fields absent instead of running.
struct Caps {
    std::uint64_t isosceles_points = 2'000'000;          // on |E| = |A|^2
    std::uint64_t instance = kDefaultInstanceCap;        // on |A|^3
    std::uint64_t pairs = kDefaultPairCap;               // on |P|^2
    std::uint64_t restricted = kDefaultRestrictedCap;    // on |A|^6
    std::uint64_t bucket_cost = kDefaultBucketCostCap;   // on groups * |P|
    bool operator==(const Caps&) const = default;
};

// One experiment row over E = A x A. Optional fields are absent when their
// stage was refused by a cap (cheap distance statistics survive an expensive
// incidence refusal) or does not apply (|A| < 2 has no incidence instance).
// Flags are 1 when the named hypothesis is violated: flag_a_vs_p23 checks
// |A|^3 > p^2, flag_p_vs_p2 checks |P| > p^2.
struct CaseReport {
    std::uint32_t p = 0;
    std::uint32_t size_a = 0;
    std::string gen_label;                        // canonical spec string
    std::optional<std::uint64_t> seed;            // random kinds only
    std::optional<std::uint64_t> delta_size;      // |Delta(A x A)|
    std::optional<Point2> best_pin;
    std::optional<std::uint32_t> best_pin_size;
    std::optional<Rational> guaranteed_bound;     // |E|^3 / N, reduced
    std::optional<std::uint64_t> n_total;         // N
    std::optional<std::uint64_t> n_restricted;
    std::optional<std::uint64_t> n_degenerate;
    std::optional<std::uint64_t> p_card;          // |P| = |Pi|
    std::optional<std::uint32_t> k_max;
    std::optional<std::uint64_t> incidences;
    std::optional<double> rudnev_ratio;           // rounded to 1e-9
    std::optional<double> theorem_ratio;          // best_pin_size / min(p, |A|^{3/2})
    std::optional<int> flag_a_vs_p23;
    std::optional<int> flag_p_vs_p2;
    std::string error;                            // stage-tagged; empty when clean
};

// Fills every field the caps allow and cross-checks the row: the averaging
// bound, restricted + degenerate = N, incidences = restricted, k <= 2|A|,
// degenerate <= 4|A|^4. A failed cross-check lands in `error` with an
// "invariant:" tag; it never throws past the row.
CaseReport run_case(const std::vector<Residue>& a, const PrimeModulus& m,
                    const Caps& caps = {}, int threads = 0);

struct SweepConfig {
    std::vector<std::uint32_t> primes;
    std::vector<std::uint32_t> sizes;
    std::vector<GenSpec> specs;
    Caps caps;
    std::uint64_t master_seed = 0;
    std::string out_path;  // optional; the CLI may override
};

// Flat key-value text: primes, sizes, specs (whitespace-separated lists),
// seed, out, cap_isosceles, cap_instance, cap_pairs, cap_restricted,
// cap_bucket_cost. '#' starts a comment. Unknown keys are rejected.
SweepConfig load_sweep_config(std::istream& in);

struct SweepResult {
    std::vector<CaseReport> rows;  // sorted by (p, |A|, spec index)
    std::optional<double> min_theorem_ratio;
    std::optional<double> max_rudnev_ratio;
    std::uint64_t error_rows = 0;
    std::uint64_t invariant_failures = 0;
};

// One row per (prime, size, spec). Case seeds derive from the master seed by
// case index, so the report is identical for any thread count.
SweepResult run_sweep(const SweepConfig& cfg, int threads = 0);

std::string csv_header();
std::string csv_row(const CaseReport& row);
void write_csv(std::ostream& out, const std::vector<CaseReport>& rows);

struct VerifyResult {
    std::uint64_t cases = 0;
    double min_theorem_ratio = 0.0;    // rounded to 1e-9
    std::vector<Residue> witness;      // an A attaining the minimum
    std::uint32_t witness_best_size = 0;
};

// Enumerates every A in F_p with 1 <= |A| <= max_size, checks the exact
// averaging inequality |Delta_u(A x A)| * N >= |A x A|^3 on each, and
// reports the minimum theorem ratio. Guarded to p <= 13 and max_size <= p
// unless forced. symmetry_reduction keeps one representative per affine
// orbit a -> s*a + t; the minimum ratio is unchanged because affine maps
// rescale all distances by s^2.
VerifyResult exhaustive_verify(const PrimeModulus& m, std::uint32_t max_size,
                               bool force = false, bool symmetry_reduction = false,
                               int threads = 0);

}  // namespace pindist
