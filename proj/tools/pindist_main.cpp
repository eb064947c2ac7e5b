// Command-line front end: distance sets, pin selection, isosceles counts,
// the point-plane incidence construction, exhaustive verification, and CSV
// sweeps. All results go to stdout as key=value lines; diagnostics to stderr.
//
// Exit codes: 0 success, 1 usage error, 2 cap/guard refusal, 3 internal
// invariant violation (e.g. an oracle mismatch).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pindist/errors.hpp"
#include "pindist/experiments.hpp"
#include "pindist/field.hpp"
#include "pindist/geometry.hpp"
#include "pindist/incidence.hpp"

namespace {

using namespace pindist;

std::string ratio9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", v);
    return buf;
}

struct SetInput {
    std::uint32_t p = 0;
    std::string set_file;
    std::string gen;
    std::uint32_t size = 0;
    std::uint64_t seed = 0;
};

void add_set_options(CLI::App* cmd, SetInput& in) {
    cmd->add_option("--p", in.p, "odd prime modulus, 3 <= p < 2^31")->required();
    auto* set_opt = cmd->add_option("--set", in.set_file,
                                    "file of residues, newline- or comma-separated");
    auto* gen_opt =
        cmd->add_option("--gen", in.gen, "generator spec kind[:param...], e.g. ap:1:3");
    cmd->add_option("--size", in.size, "generated set size (defaults to the list length)");
    cmd->add_option("--seed", in.seed, "seed for the random generator");
    set_opt->excludes(gen_opt);
    gen_opt->excludes(set_opt);
}

std::vector<Residue> load_set_file(const std::string& path, const PrimeModulus& m) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read set file '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    for (char& ch : text) {
        if (ch == ',') ch = ' ';
    }
    std::istringstream items(text);
    std::vector<Residue> values;
    std::int64_t v = 0;
    while (items >> v) values.push_back(m.reduce(v));
    if (!items.eof()) {
        std::string tok;
        items.clear();
        items >> tok;
        throw std::invalid_argument("set file '" + path + "': bad token '" + tok + "'");
    }
    if (values.empty()) throw std::invalid_argument("set file '" + path + "' has no residues");
    std::size_t raw = values.size();
    std::vector<Residue> distinct = canonical_subset(values, m);
    if (distinct.size() != raw) {
        std::cerr << "warning: " << (raw - distinct.size()) << " of " << raw
                  << " residues collapsed mod " << m.value() << '\n';
    }
    return distinct;
}

std::vector<Residue> load_set(const SetInput& in, const PrimeModulus& m) {
    if (!in.set_file.empty()) return load_set_file(in.set_file, m);
    if (in.gen.empty()) {
        throw std::invalid_argument("one of --set or --gen is required");
    }
    GenSpec spec = parse_gen_spec(in.gen);
    std::uint32_t size = in.size;
    if (size == 0) {
        if (spec.kind != GenKind::explicit_list) {
            throw std::invalid_argument("--size is required with --gen " + in.gen);
        }
        size = static_cast<std::uint32_t>(spec.params.size());
    }
    return generate_set(spec, size, m, in.seed);
}

void print_set_header(const PrimeModulus& m, const std::vector<Residue>& a) {
    std::cout << "p=" << m.value() << '\n';
    std::cout << "size_a=" << a.size() << '\n';
    std::cout << "size_e=" << a.size() * a.size() << '\n';
}

int cmd_dist(const SetInput& in) {
    PrimeModulus m(in.p);
    std::vector<Residue> a = load_set(in, m);
    std::vector<Residue> delta = distance_set_cartesian(a, m);
    print_set_header(m, a);
    std::cout << "delta_size=" << delta.size() << '\n';
    constexpr std::size_t kListCap = 1000;
    std::cout << "delta=";
    for (std::size_t i = 0; i < delta.size() && i < kListCap; ++i) {
        if (i != 0) std::cout << ' ';
        std::cout << delta[i];
    }
    std::cout << '\n';
    std::cout << "delta_truncated=" << (delta.size() > kListCap ? 1 : 0) << '\n';
    return 0;
}

int cmd_pin(const SetInput& in) {
    PrimeModulus m(in.p);
    std::vector<Residue> a = load_set(in, m);
    PointSet2 e = PointSet2::cartesian(a, m);
    GuaranteedPin g = guaranteed_pin(e);
    BestPin b = best_pin(e);
    print_set_header(m, a);
    std::cout << "n_total=" << isosceles_count(e) << '\n';
    std::cout << "best_pin_x=" << b.pin.x << '\n';
    std::cout << "best_pin_y=" << b.pin.y << '\n';
    std::cout << "best_pin_size=" << b.delta_size << '\n';
    std::cout << "guaranteed_pin_x=" << g.pin.x << '\n';
    std::cout << "guaranteed_pin_y=" << g.pin.y << '\n';
    std::cout << "guaranteed_pin_size=" << g.pin_delta_size << '\n';
    std::cout << "guaranteed_bound_num=" << g.bound.num << '\n';
    std::cout << "guaranteed_bound_den=" << g.bound.den << '\n';
    return 0;
}

int cmd_count_n(const SetInput& in, bool oracle, std::uint64_t oracle_cap) {
    PrimeModulus m(in.p);
    std::vector<Residue> a = load_set(in, m);
    PointSet2 e = PointSet2::cartesian(a, m);
    std::uint64_t n = isosceles_count(e);
    std::uint64_t restricted = restricted_isosceles_count(a, m);
    std::uint64_t degenerate = degenerate_case_count(a, m);
    if (restricted + degenerate != n) {
        throw invariant_violation("restricted + degenerate = " +
                                  std::to_string(restricted + degenerate) + " but N = " +
                                  std::to_string(n));
    }
    print_set_header(m, a);
    std::cout << "n_total=" << n << '\n';
    std::cout << "n_restricted=" << restricted << '\n';
    std::cout << "n_degenerate=" << degenerate << '\n';
    if (oracle) {
        std::uint64_t brute = isosceles_count_bruteforce(e, oracle_cap);
        std::cout << "oracle_n=" << brute << '\n';
        if (brute != n) {
            throw invariant_violation("histogram count " + std::to_string(n) +
                                      " disagrees with brute force " + std::to_string(brute));
        }
        std::cout << "oracle_match=1\n";
    }
    return 0;
}

int cmd_incidence(const SetInput& in, bool naive, const std::string& export_path) {
    PrimeModulus m(in.p);
    std::vector<Residue> a = load_set(in, m);
    IncidenceInstance inst = build_instance(a, m);
    std::uint64_t incidences =
        naive ? count_incidences_naive(inst) : count_incidences_bucketed(inst);
    std::uint32_t k = max_collinear(inst.points, m);
    RudnevRatio rr = rudnev_ratio(inst, incidences, k);
    std::cout << "p=" << m.value() << '\n';
    std::cout << "size_a=" << a.size() << '\n';
    std::cout << "p_card=" << inst.points.size() << '\n';
    std::cout << "k_max=" << k << '\n';
    std::cout << "incidences=" << incidences << '\n';
    std::cout << "method=" << (naive ? "naive" : "bucketed") << '\n';
    std::cout << "rudnev_num=" << rr.incidences << '\n';
    std::cout << "rudnev_den=" << rr.denominator << '\n';
    std::cout << "rudnev_ratio=" << ratio9(rr.value()) << '\n';
    std::cout << "flag_p_vs_p2=" << (rr.p_square_exceeded ? 1 : 0) << '\n';
    if (!export_path.empty()) {
        std::ofstream out(export_path);
        if (!out) throw std::invalid_argument("cannot write '" + export_path + "'");
        write_instance(out, inst);
        std::cout << "exported=" << export_path << '\n';
    }
    return 0;
}

int cmd_verify(std::uint32_t p, std::uint32_t max_size, bool force, bool symmetry) {
    PrimeModulus m(p);
    VerifyResult res = exhaustive_verify(m, max_size, force, symmetry);
    std::cout << "p=" << p << '\n';
    std::cout << "max_size=" << max_size << '\n';
    std::cout << "cases=" << res.cases << '\n';
    std::cout << "lemma_failures=0\n";
    std::cout << "min_theorem_ratio=" << ratio9(res.min_theorem_ratio) << '\n';
    std::cout << "witness_a=";
    for (std::size_t i = 0; i < res.witness.size(); ++i) {
        if (i != 0) std::cout << ' ';
        std::cout << res.witness[i];
    }
    std::cout << '\n';
    std::cout << "witness_best_size=" << res.witness_best_size << '\n';
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_override) {
    std::ifstream cfg_in(config_path);
    if (!cfg_in) throw std::invalid_argument("cannot read config '" + config_path + "'");
    SweepConfig cfg = load_sweep_config(cfg_in);
    if (!out_override.empty()) cfg.out_path = out_override;
    if (cfg.out_path.empty()) {
        throw std::invalid_argument("no output path: pass --out or set 'out' in the config");
    }
    SweepResult res = run_sweep(cfg);
    {
        std::ofstream out(cfg.out_path);
        if (!out) throw std::invalid_argument("cannot write '" + cfg.out_path + "'");
        write_csv(out, res.rows);
    }
    std::cout << "rows=" << res.rows.size() << '\n';
    std::cout << "error_rows=" << res.error_rows << '\n';
    std::cout << "invariant_failures=" << res.invariant_failures << '\n';
    if (res.min_theorem_ratio) {
        std::cout << "min_theorem_ratio=" << ratio9(*res.min_theorem_ratio) << '\n';
    }
    if (res.max_rudnev_ratio) {
        std::cout << "max_rudnev_ratio=" << ratio9(*res.max_rudnev_ratio) << '\n';
    }
    std::cout << "out=" << cfg.out_path << '\n';
    if (res.invariant_failures != 0) {
        std::cerr << "invariant failures recorded in " << cfg.out_path << '\n';
        return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact pinned-distance laboratory over prime fields"};
    app.require_subcommand(1);

    SetInput dist_in;
    auto* dist = app.add_subcommand("dist", "distance set of A x A");
    add_set_options(dist, dist_in);

    SetInput pin_in;
    auto* pin = app.add_subcommand("pin", "best and guaranteed pins of A x A");
    add_set_options(pin, pin_in);

    SetInput count_in;
    bool count_oracle = false;
    std::uint64_t oracle_cap = 200;
    auto* count = app.add_subcommand("count-n", "isosceles triple count of A x A");
    add_set_options(count, count_in);
    count->add_flag("--oracle", count_oracle, "also run the cubic brute force and compare");
    count->add_option("--oracle-cap", oracle_cap, "largest |E| the brute force accepts");

    SetInput inc_in;
    bool inc_naive = false;
    std::string inc_export;
    auto* inc = app.add_subcommand("incidence", "point-plane incidence instance from A");
    add_set_options(inc, inc_in);
    inc->add_flag("--naive", inc_naive, "count with the quadratic oracle instead");
    inc->add_option("--export", inc_export, "write the instance to this file");

    std::uint32_t verify_p = 0;
    std::uint32_t verify_max = 0;
    bool verify_force = false;
    bool verify_symmetry = false;
    auto* verify = app.add_subcommand("verify", "check the averaging bound on every small A");
    verify->add_option("--p", verify_p, "odd prime modulus")->required();
    verify->add_option("--max-size", verify_max, "largest |A| to enumerate")->required();
    verify->add_flag("--force", verify_force, "lift the p <= 13 guard");
    verify->add_flag("--symmetry", verify_symmetry, "one representative per affine orbit");

    std::string sweep_config;
    std::string sweep_out;
    auto* sweep = app.add_subcommand("sweep", "run a CSV experiment sweep");
    sweep->add_option("--config", sweep_config, "flat key=value sweep description")->required();
    sweep->add_option("--out", sweep_out, "CSV path (overrides the config's 'out')");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(dist)) return cmd_dist(dist_in);
        if (app.got_subcommand(pin)) return cmd_pin(pin_in);
        if (app.got_subcommand(count)) return cmd_count_n(count_in, count_oracle, oracle_cap);
        if (app.got_subcommand(inc)) return cmd_incidence(inc_in, inc_naive, inc_export);
        if (app.got_subcommand(verify)) {
            return cmd_verify(verify_p, verify_max, verify_force, verify_symmetry);
        }
        if (app.got_subcommand(sweep)) return cmd_sweep(sweep_config, sweep_out);
    } catch (const invariant_violation& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return 3;
    } catch (const cap_exceeded& e) {
        std::cerr << "refused: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
    return 1;
}
