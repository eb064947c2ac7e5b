#include "pindist/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <unordered_set>

#include "pindist/errors.hpp"
#include "pindist/parallel.hpp"
#include "pindist/rng.hpp"

namespace pindist {

namespace {

using u128 = unsigned __int128;

// N must fit 64 bits: the largest |E| whose cube does.
constexpr std::uint64_t kCubeSafePoints = 2'642'245;

double round9(double v) { return std::round(v * 1e9) / 1e9; }

std::string format_ratio(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", v);
    return buf;
}

// min(p, |A|^{3/2}) with the square root evaluated in double precision.
double theorem_denominator(std::uint32_t p, std::uint32_t n) {
    double half_power = static_cast<double>(n) * std::sqrt(static_cast<double>(n));
    return std::min(static_cast<double>(p), half_power);
}

std::int64_t parse_i64(const std::string& tok) {
    std::size_t used = 0;
    std::int64_t v = std::stoll(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("trailing characters");
    return v;
}

}  // namespace

GenSpec parse_gen_spec(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);

    GenSpec spec;
    const std::string& kind = parts.front();
    std::size_t want_params = 0;
    bool variadic = false;
    if (kind == "interval") {
        spec.kind = GenKind::interval;
    } else if (kind == "ap") {
        spec.kind = GenKind::arithmetic_progression;
        want_params = 2;
    } else if (kind == "gp") {
        spec.kind = GenKind::geometric_progression;
        want_params = 2;
    } else if (kind == "random") {
        spec.kind = GenKind::random_subset;
    } else if (kind == "list") {
        spec.kind = GenKind::explicit_list;
        variadic = true;
    } else if (kind == "iso") {
        spec.kind = GenKind::isotropic_line_section;
    } else {
        throw std::invalid_argument("unknown generator kind '" + kind + "'");
    }

    for (std::size_t i = 1; i < parts.size(); ++i) {
        try {
            spec.params.push_back(parse_i64(parts[i]));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad generator parameter '" + parts[i] + "' in '" +
                                        text + "'");
        }
    }
    if (variadic) {
        if (spec.params.empty()) {
            throw std::invalid_argument("generator 'list' needs at least one value");
        }
    } else if (spec.params.size() != want_params) {
        throw std::invalid_argument("generator '" + kind + "' takes " +
                                    std::to_string(want_params) + " parameters, got " +
                                    std::to_string(spec.params.size()));
    }
    return spec;
}

std::string to_string(const GenSpec& spec) {
    std::string out;
    switch (spec.kind) {
        case GenKind::interval: out = "interval"; break;
        case GenKind::arithmetic_progression: out = "ap"; break;
        case GenKind::geometric_progression: out = "gp"; break;
        case GenKind::random_subset: out = "random"; break;
        case GenKind::explicit_list: out = "list"; break;
        case GenKind::isotropic_line_section: out = "iso"; break;
    }
    for (std::int64_t v : spec.params) out += ":" + std::to_string(v);
    return out;
}

std::vector<Residue> generate_set(const GenSpec& spec, std::uint32_t size,
                                  const PrimeModulus& m, std::uint64_t seed) {
    const std::uint32_t p = m.value();
    if (size == 0) throw std::invalid_argument("generated set size must be positive");
    if (size > p) {
        throw std::invalid_argument("cannot pick " + std::to_string(size) +
                                    " distinct residues mod " + std::to_string(p));
    }
    std::vector<Residue> out;
    out.reserve(size);
    switch (spec.kind) {
        case GenKind::interval: {
            for (std::uint32_t i = 0; i < size; ++i) out.push_back(i);
            break;
        }
        case GenKind::arithmetic_progression: {
            Residue start = m.reduce(spec.params[0]);
            Residue step = m.reduce(spec.params[1]);
            if (step == 0) {
                throw std::invalid_argument("arithmetic progression step is 0 mod p");
            }
            Residue v = start;
            for (std::uint32_t i = 0; i < size; ++i) {
                out.push_back(v);
                v = m.add(v, step);
            }
            break;
        }
        case GenKind::geometric_progression: {
            Residue base = m.reduce(spec.params[0]);
            Residue ratio = m.reduce(spec.params[1]);
            if (base == 0) throw std::invalid_argument("geometric progression base is 0 mod p");
            if (ratio == 0 || ratio == 1) {
                throw std::invalid_argument("geometric progression ratio must not be 0 or 1");
            }
            Residue v = base;
            for (std::uint32_t i = 0; i < size; ++i) {
                out.push_back(v);
                v = m.mul(v, ratio);
            }
            std::vector<Residue> distinct = canonical_subset(out, m);
            if (distinct.size() != size) {
                throw std::invalid_argument(
                    "geometric progression cycles after " + std::to_string(distinct.size()) +
                    " elements, cannot reach size " + std::to_string(size));
            }
            break;
        }
        case GenKind::random_subset: {
            // Floyd's sampling: exactly `size` distinct values, seed-stable.
            SplitMix64 rng(seed);
            std::unordered_set<Residue> chosen;
            chosen.reserve(2 * size);
            for (std::uint64_t j = p - size; j < p; ++j) {
                auto t = static_cast<Residue>(rng.bounded(j + 1));
                Residue v = chosen.count(t) != 0 ? static_cast<Residue>(j) : t;
                chosen.insert(v);
                out.push_back(v);
            }
            break;
        }
        case GenKind::explicit_list: {
            for (std::int64_t v : spec.params) out.push_back(m.reduce(v));
            std::vector<Residue> distinct = canonical_subset(out, m);
            if (distinct.size() != spec.params.size()) {
                throw std::invalid_argument("explicit list collapses mod " + std::to_string(p) +
                                            ": " + std::to_string(spec.params.size()) +
                                            " values, " + std::to_string(distinct.size()) +
                                            " distinct");
            }
            if (distinct.size() != size) {
                throw std::invalid_argument("explicit list has " +
                                            std::to_string(distinct.size()) +
                                            " values, requested size " + std::to_string(size));
            }
            break;
        }
        case GenKind::isotropic_line_section: {
            if (p % 4 != 1) {
                throw std::invalid_argument("isotropic sections need p = 1 (mod 4), got p=" +
                                            std::to_string(p));
            }
            for (std::uint32_t i = 0; i < size; ++i) out.push_back(i);
            break;
        }
    }
    std::vector<Residue> result = canonical_subset(out, m);
    if (result.size() != size) {
        throw invariant_violation("generator produced " + std::to_string(result.size()) +
                                  " distinct values instead of " + std::to_string(size));
    }
    return result;
}

CaseReport run_case(const std::vector<Residue>& a, const PrimeModulus& m, const Caps& caps,
                    int threads) {
    std::vector<Residue> vals = canonical_subset(a, m);
    if (vals.empty()) throw std::invalid_argument("empty set");
    const std::uint64_t n = vals.size();
    const std::uint32_t p = m.value();
    const std::uint64_t esize = n * n;

    CaseReport row;
    row.p = p;
    row.size_a = static_cast<std::uint32_t>(n);
    row.flag_a_vs_p23 = u128(n) * n * n > u128(p) * p ? 1 : 0;
    std::vector<std::string> errs;

    // Distance statistics over E = A x A.
    try {
        if (esize > caps.isosceles_points || esize > kCubeSafePoints) {
            throw cap_exceeded("|E| = " + std::to_string(esize) + " exceeds the cap of " +
                               std::to_string(std::min<std::uint64_t>(caps.isosceles_points,
                                                                      kCubeSafePoints)));
        }
        PointSet2 e = PointSet2::cartesian(vals, m);
        PinScanResult scan = pin_scan(e, threads);
        row.n_total = scan.n_total;
        row.best_pin = scan.best_pin;
        row.best_pin_size = scan.best_size;
        std::uint64_t cube = esize * esize * esize;
        std::uint64_t g = std::gcd(cube, scan.n_total);
        row.guaranteed_bound = Rational{cube / g, scan.n_total / g};
        row.delta_size = distance_set_cartesian(vals, m).size();
        row.theorem_ratio = round9(scan.best_size / theorem_denominator(p, row.size_a));
        if (u128(scan.min_chi_support) * scan.n_total < u128(esize) * esize * esize) {
            errs.push_back("invariant: averaging bound |Delta_u| * N >= |E|^3 failed");
        }
    } catch (const cap_exceeded& e) {
        errs.push_back(std::string("distance: ") + e.what());
    }

    // The two sides of the triple partition, counted directly.
    try {
        row.n_restricted = restricted_isosceles_count(vals, m, caps.restricted);
        row.n_degenerate = degenerate_case_count(vals, m, caps.restricted);
        if (row.n_total && *row.n_restricted + *row.n_degenerate != *row.n_total) {
            errs.push_back("invariant: restricted + degenerate != N");
        }
        if (*row.n_degenerate > 4 * n * n * n * n) {
            errs.push_back("invariant: degenerate count exceeds 4|A|^4");
        }
    } catch (const cap_exceeded& e) {
        errs.push_back(std::string("restricted: ") + e.what());
    }

    // Incidence instance; needs at least two values to form v != w pairs.
    if (n >= 2) {
        try {
            IncidenceInstance inst = build_instance(vals, m, caps.instance);
            row.p_card = inst.points.size();
            row.flag_p_vs_p2 = u128(inst.points.size()) > u128(p) * p ? 1 : 0;
            try {
                row.incidences = count_incidences_bucketed(inst, threads, caps.bucket_cost);
                if (row.n_restricted && *row.incidences != *row.n_restricted) {
                    errs.push_back("invariant: incidences != restricted count");
                }
            } catch (const cap_exceeded& e) {
                errs.push_back(std::string("incidence: ") + e.what());
            }
            try {
                row.k_max = max_collinear(inst.points, m, caps.pairs, threads);
                if (*row.k_max > 2 * n) {
                    errs.push_back("invariant: max collinearity exceeds 2|A|");
                }
            } catch (const cap_exceeded& e) {
                errs.push_back(std::string("collinear: ") + e.what());
            }
            if (row.incidences && row.k_max) {
                RudnevRatio rr = rudnev_ratio(inst, *row.incidences, *row.k_max);
                row.rudnev_ratio = round9(rr.value());
            }
        } catch (const cap_exceeded& e) {
            errs.push_back(std::string("instance: ") + e.what());
        }
    }

    for (const std::string& e : errs) {
        if (!row.error.empty()) row.error += "; ";
        row.error += e;
    }
    return row;
}

SweepConfig load_sweep_config(std::istream& in) {
    SweepConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
        auto trim = [&](std::string s) {
            while (!s.empty() && is_space(s.front())) s.erase(s.begin());
            while (!s.empty() && is_space(s.back())) s.pop_back();
            return s;
        };
        if (trim(line).empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("sweep config line " + std::to_string(lineno) +
                                        ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        std::istringstream items(value);
        try {
            if (key == "primes") {
                std::uint64_t v = 0;
                while (items >> v) {
                    if (v >= (1ull << 31)) throw std::invalid_argument("prime out of range");
                    PrimeModulus check(static_cast<std::uint32_t>(v));
                    cfg.primes.push_back(check.value());
                }
                if (!items.eof()) throw std::invalid_argument("bad integer in list");
            } else if (key == "sizes") {
                std::uint64_t v = 0;
                while (items >> v) {
                    if (v == 0 || v > std::numeric_limits<std::uint32_t>::max()) {
                        throw std::invalid_argument("size out of range");
                    }
                    cfg.sizes.push_back(static_cast<std::uint32_t>(v));
                }
                if (!items.eof()) throw std::invalid_argument("bad integer in list");
            } else if (key == "specs") {
                std::string tok;
                while (items >> tok) cfg.specs.push_back(parse_gen_spec(tok));
            } else if (key == "seed") {
                cfg.master_seed = std::stoull(value);
            } else if (key == "out") {
                cfg.out_path = value;
            } else if (key == "cap_isosceles") {
                cfg.caps.isosceles_points = std::stoull(value);
            } else if (key == "cap_instance") {
                cfg.caps.instance = std::stoull(value);
            } else if (key == "cap_pairs") {
                cfg.caps.pairs = std::stoull(value);
            } else if (key == "cap_restricted") {
                cfg.caps.restricted = std::stoull(value);
            } else if (key == "cap_bucket_cost") {
                cfg.caps.bucket_cost = std::stoull(value);
            } else {
                throw std::invalid_argument("unknown key");
            }
        } catch (const std::exception& e) {
            throw std::invalid_argument("sweep config line " + std::to_string(lineno) + " ('" +
                                        key + "'): " + e.what());
        }
    }
    return cfg;
}

namespace {

struct SweepTask {
    std::size_t index = 0;  // position in the config cross product; seeds derive from it
    std::uint32_t p = 0;
    std::uint32_t size = 0;
    std::size_t spec_idx = 0;
};

CaseReport sweep_case(const SweepTask& task, const SweepConfig& cfg) {
    const GenSpec& spec = cfg.specs[task.spec_idx];
    CaseReport row;
    row.p = task.p;
    row.size_a = task.size;
    row.gen_label = to_string(spec);
    std::uint64_t case_seed = splitmix64(cfg.master_seed + task.index);
    if (spec.kind == GenKind::random_subset) row.seed = case_seed;
    try {
        PrimeModulus m(task.p);
        std::vector<Residue> a = generate_set(spec, task.size, m, case_seed);
        CaseReport full = run_case(a, m, cfg.caps, /*threads=*/1);
        full.gen_label = row.gen_label;
        full.seed = row.seed;
        return full;
    } catch (const std::exception& e) {
        row.error = std::string("generate: ") + e.what();
        return row;
    }
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg, int threads) {
    std::vector<SweepTask> tasks;
    tasks.reserve(cfg.primes.size() * cfg.sizes.size() * cfg.specs.size());
    std::size_t index = 0;
    for (std::uint32_t p : cfg.primes) {
        for (std::uint32_t size : cfg.sizes) {
            for (std::size_t si = 0; si < cfg.specs.size(); ++si) {
                tasks.push_back({index++, p, size, si});
            }
        }
    }

    SweepResult result;
    result.rows.resize(tasks.size());
    const auto count = static_cast<std::int64_t>(tasks.size());
    const int t = resolve_threads(threads);
#pragma omp parallel for schedule(dynamic) num_threads(t)
    for (std::int64_t i = 0; i < count; ++i) {
        result.rows[static_cast<std::size_t>(i)] = sweep_case(tasks[static_cast<std::size_t>(i)], cfg);
    }

    std::vector<std::size_t> order(tasks.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) {
        const SweepTask& a = tasks[lhs];
        const SweepTask& b = tasks[rhs];
        return std::tie(a.p, a.size, a.spec_idx, a.index) <
               std::tie(b.p, b.size, b.spec_idx, b.index);
    });
    std::vector<CaseReport> sorted;
    sorted.reserve(result.rows.size());
    for (std::size_t i : order) sorted.push_back(std::move(result.rows[i]));
    result.rows = std::move(sorted);

    for (const CaseReport& row : result.rows) {
        if (row.theorem_ratio &&
            (!result.min_theorem_ratio || *row.theorem_ratio < *result.min_theorem_ratio)) {
            result.min_theorem_ratio = row.theorem_ratio;
        }
        if (row.rudnev_ratio &&
            (!result.max_rudnev_ratio || *row.rudnev_ratio > *result.max_rudnev_ratio)) {
            result.max_rudnev_ratio = row.rudnev_ratio;
        }
        if (!row.error.empty()) {
            ++result.error_rows;
            if (row.error.find("invariant:") != std::string::npos) {
                ++result.invariant_failures;
            }
        }
    }
    return result;
}

namespace {

void csv_escape_into(std::string& line, const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) {
        line += field;
        return;
    }
    line += '"';
    for (char ch : field) {
        if (ch == '"') line += '"';
        line += ch;
    }
    line += '"';
}

template <class T>
std::string opt_str(const std::optional<T>& v) {
    return v ? std::to_string(*v) : std::string();
}

std::string opt_ratio(const std::optional<double>& v) {
    return v ? format_ratio(*v) : std::string();
}

}  // namespace

std::string csv_header() {
    return "p,size_a,gen_kind,seed,delta_size,best_pin_x,best_pin_y,best_pin_size,"
           "guaranteed_bound_num,guaranteed_bound_den,n_total,n_restricted,n_degenerate,"
           "p_card,k_max,incidences,rudnev_ratio,theorem_ratio,flag_a_vs_p23,flag_p_vs_p2,"
           "error";
}

std::string csv_row(const CaseReport& row) {
    std::vector<std::string> fields;
    fields.reserve(21);
    fields.push_back(std::to_string(row.p));
    fields.push_back(std::to_string(row.size_a));
    fields.push_back(row.gen_label);
    fields.push_back(opt_str(row.seed));
    fields.push_back(opt_str(row.delta_size));
    fields.push_back(row.best_pin ? std::to_string(row.best_pin->x) : std::string());
    fields.push_back(row.best_pin ? std::to_string(row.best_pin->y) : std::string());
    fields.push_back(opt_str(row.best_pin_size));
    fields.push_back(row.guaranteed_bound ? std::to_string(row.guaranteed_bound->num)
                                          : std::string());
    fields.push_back(row.guaranteed_bound ? std::to_string(row.guaranteed_bound->den)
                                          : std::string());
    fields.push_back(opt_str(row.n_total));
    fields.push_back(opt_str(row.n_restricted));
    fields.push_back(opt_str(row.n_degenerate));
    fields.push_back(opt_str(row.p_card));
    fields.push_back(opt_str(row.k_max));
    fields.push_back(opt_str(row.incidences));
    fields.push_back(opt_ratio(row.rudnev_ratio));
    fields.push_back(opt_ratio(row.theorem_ratio));
    fields.push_back(opt_str(row.flag_a_vs_p23));
    fields.push_back(opt_str(row.flag_p_vs_p2));
    std::string line;
    for (const std::string& f : fields) {
        csv_escape_into(line, f);
        line += ',';
    }
    csv_escape_into(line, row.error);
    return line;
}

void write_csv(std::ostream& out, const std::vector<CaseReport>& rows) {
    out << csv_header() << '\n';
    for (const CaseReport& row : rows) out << csv_row(row) << '\n';
}

namespace {

// Lexicographically smallest image of A under a -> s*a + t decides orbit
// representatives; distances rescale by s^2, so pin statistics are shared
// across the orbit.
bool is_affine_canonical(const std::vector<Residue>& a, const PrimeModulus& m) {
    std::vector<Residue> image(a.size());
    for (Residue s = 1; s < m.value(); ++s) {
        for (Residue t = 0; t < m.value(); ++t) {
            for (std::size_t i = 0; i < a.size(); ++i) {
                image[i] = m.add(m.mul(s, a[i]), t);
            }
            std::sort(image.begin(), image.end());
            if (std::lexicographical_compare(image.begin(), image.end(), a.begin(), a.end())) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

VerifyResult exhaustive_verify(const PrimeModulus& m, std::uint32_t max_size, bool force,
                               bool symmetry_reduction, int threads) {
    const std::uint32_t p = m.value();
    if (!force && (p > 13 || max_size > p)) {
        throw cap_exceeded("exhaustive_verify: needs p <= 13 and max_size <= p (or force)");
    }
    const std::uint32_t limit = std::min(max_size, p);
    if (limit == 0) throw std::invalid_argument("max_size must be positive");

    VerifyResult res;
    res.min_theorem_ratio = std::numeric_limits<double>::infinity();
    std::vector<Residue> subset;
    for (std::uint32_t k = 1; k <= limit; ++k) {
        // Iterate k-subsets of {0..p-1} as sorted index vectors.
        subset.assign(k, 0);
        for (std::uint32_t i = 0; i < k; ++i) subset[i] = i;
        while (true) {
            if (!symmetry_reduction || is_affine_canonical(subset, m)) {
                PointSet2 e = PointSet2::cartesian(subset, m);
                PinScanResult scan = pin_scan(e, threads);
                std::uint64_t esize = e.size();
                if (u128(scan.min_chi_support) * scan.n_total < u128(esize) * esize * esize) {
                    std::string witness;
                    for (Residue v : subset) witness += std::to_string(v) + " ";
                    throw invariant_violation("averaging bound failed for p=" +
                                              std::to_string(p) + ", A={ " + witness + "}");
                }
                double ratio = scan.best_size / theorem_denominator(p, k);
                ++res.cases;
                if (ratio < res.min_theorem_ratio) {
                    res.min_theorem_ratio = ratio;
                    res.witness = subset;
                    res.witness_best_size = scan.best_size;
                }
            }
            // Next combination in lexicographic order.
            std::uint32_t i = k;
            while (i > 0 && subset[i - 1] == p - k + i - 1) --i;
            if (i == 0) break;
            ++subset[i - 1];
            for (std::uint32_t j = i; j < k; ++j) subset[j] = subset[j - 1] + 1;
        }
    }
    res.min_theorem_ratio = round9(res.min_theorem_ratio);
    return res;
}

}  // namespace pindist
