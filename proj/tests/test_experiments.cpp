#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pindist/errors.hpp"
#include "pindist/experiments.hpp"
#include "pindist/field.hpp"
#include "pindist/geometry.hpp"

using namespace pindist;

namespace {

std::string sweep_to_csv(const SweepConfig& cfg, int threads) {
    SweepResult res = run_sweep(cfg, threads);
    std::ostringstream out;
    write_csv(out, res.rows);
    return out.str();
}

}  // namespace

TEST_CASE("generator spec grammar round-trips") {
    for (const char* text : {"interval", "ap:1:3", "gp:2:3", "random", "list:0:1:4", "iso",
                             "ap:-1:5", "list:-3"}) {
        CAPTURE(text);
        CHECK(to_string(parse_gen_spec(text)) == text);
    }
    CHECK(parse_gen_spec("ap:1:3").kind == GenKind::arithmetic_progression);
    CHECK(parse_gen_spec("ap:1:3").params == std::vector<std::int64_t>{1, 3});
    CHECK(parse_gen_spec("random").params.empty());

    CHECK_THROWS_AS(parse_gen_spec("bogus"), std::invalid_argument);
    CHECK_THROWS_AS(parse_gen_spec(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_gen_spec("ap"), std::invalid_argument);
    CHECK_THROWS_AS(parse_gen_spec("ap:1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_gen_spec("ap:1:2:3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_gen_spec("list"), std::invalid_argument);
    CHECK_THROWS_AS(parse_gen_spec("ap:x:2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_gen_spec("interval:4"), std::invalid_argument);
}

TEST_CASE("generate_set per kind") {
    PrimeModulus m7(7);

    CHECK(generate_set(parse_gen_spec("interval"), 4, m7) ==
          std::vector<Residue>{0, 1, 2, 3});
    CHECK(generate_set(parse_gen_spec("ap:1:3"), 3, m7) == std::vector<Residue>{0, 1, 4});
    CHECK(generate_set(parse_gen_spec("gp:2:3"), 3, m7) == std::vector<Residue>{2, 4, 6});
    CHECK(generate_set(parse_gen_spec("list:9:-1:3"), 3, m7) ==
          std::vector<Residue>{2, 3, 6});  // values land mod 7, sorted
}

TEST_CASE("generate_set validates and stays deterministic") {
    PrimeModulus m7(7);
    PrimeModulus m13(13);

    CHECK_THROWS_AS(generate_set(parse_gen_spec("interval"), 0, m7), std::invalid_argument);
    CHECK_THROWS_AS(generate_set(parse_gen_spec("interval"), 8, m7), std::invalid_argument);
    CHECK_THROWS_AS(generate_set(parse_gen_spec("ap:0:7"), 2, m7), std::invalid_argument);
    CHECK_THROWS_AS(generate_set(parse_gen_spec("gp:0:2"), 2, m7), std::invalid_argument);
    CHECK_THROWS_AS(generate_set(parse_gen_spec("gp:2:1"), 2, m7), std::invalid_argument);
    // 6^2 = 1 (mod 7), so the orbit of 2 under *6 has just two elements.
    CHECK_THROWS_AS(generate_set(parse_gen_spec("gp:2:6"), 3, m7), std::invalid_argument);
    CHECK_THROWS_AS(generate_set(parse_gen_spec("list:0:7"), 2, m7), std::invalid_argument);
    CHECK_THROWS_AS(generate_set(parse_gen_spec("list:0:1"), 3, m7), std::invalid_argument);
    CHECK_THROWS_AS(generate_set(parse_gen_spec("iso"), 3, m7), std::invalid_argument);

    CHECK(generate_set(parse_gen_spec("iso"), 3, m13) == std::vector<Residue>{0, 1, 2});

    GenSpec random = parse_gen_spec("random");
    std::vector<Residue> a = generate_set(random, 5, m13, 99);
    CHECK(a == generate_set(random, 5, m13, 99));
    CHECK(a.size() == 5);
    CHECK(std::is_sorted(a.begin(), a.end()));
    CHECK(a.back() < 13);
    CHECK(a != generate_set(random, 5, m13, 100));
    // Full-size draws must also terminate (Floyd's method never rejects).
    CHECK(generate_set(random, 13, m13, 7).size() == 13);
}

TEST_CASE("run_case fills a complete row for A = {0, 1, 2} mod 7") {
    PrimeModulus m(7);
    CaseReport row = run_case({0, 1, 2}, m);

    CHECK(row.p == 7);
    CHECK(row.size_a == 3);
    CHECK(row.error.empty());
    REQUIRE(row.n_total);
    CHECK(*row.n_total == 185);
    CHECK(*row.n_restricted == 68);
    CHECK(*row.n_degenerate == 117);
    CHECK(*row.delta_size == 5);
    CHECK(*row.best_pin == Point2{0, 0});
    CHECK(*row.best_pin_size == 5);
    CHECK(*row.guaranteed_bound == Rational{729, 185});
    CHECK(*row.p_card == 18);
    CHECK(*row.k_max == 3);
    CHECK(*row.incidences == 68);
    CHECK(*row.flag_a_vs_p23 == 0);  // 27 <= 49
    CHECK(*row.flag_p_vs_p2 == 0);   // 18 <= 49
    double denom = std::min(7.0, 3.0 * std::sqrt(3.0));
    CHECK(*row.theorem_ratio == doctest::Approx(5.0 / denom).epsilon(1e-8));
    REQUIRE(row.rudnev_ratio);
    CHECK(*row.rudnev_ratio > 0.0);
}

TEST_CASE("run_case edge shapes") {
    SUBCASE("singleton has no incidence stage") {
        PrimeModulus m(5);
        CaseReport row = run_case({3}, m);
        CHECK(row.size_a == 1);
        CHECK(*row.n_total == 1);
        CHECK(*row.n_restricted == 0);
        CHECK(*row.n_degenerate == 1);
        CHECK_FALSE(row.p_card.has_value());
        CHECK_FALSE(row.incidences.has_value());
        CHECK(row.error.empty());
    }
    SUBCASE("hypothesis flags trip on tiny primes") {
        PrimeModulus m(3);
        CaseReport row = run_case({0, 1, 2}, m);
        CHECK(*row.flag_a_vs_p23 == 1);  // 27 > 9
        CHECK(*row.flag_p_vs_p2 == 1);   // |P| = 18 > 9
        CHECK(row.error.empty());        // flags are observations, not failures
    }
    SUBCASE("caps skip stages but keep the row") {
        PrimeModulus m(13);
        Caps caps;
        caps.isosceles_points = 4;  // |E| = 9 exceeds this
        CaseReport row = run_case({0, 1, 5}, m, caps);
        CHECK_FALSE(row.n_total.has_value());
        CHECK(row.n_restricted.has_value());
        CHECK(row.p_card.has_value());
        CHECK(row.error.find("distance:") != std::string::npos);
        CHECK(row.error.find("invariant:") == std::string::npos);
    }
    SUBCASE("duplicates collapse, empty input refused") {
        PrimeModulus m(5);
        CaseReport row = run_case({1, 1, 3}, m);
        CHECK(row.size_a == 2);
        CHECK_THROWS_AS(run_case({}, m), std::invalid_argument);
    }
}

TEST_CASE("sweep config parsing") {
    SUBCASE("full config") {
        std::istringstream in(
            "# comment line\n"
            "primes = 5 7 13\n"
            "sizes = 2 3\n"
            "specs = interval ap:1:3 random\n"
            "seed = 42\n"
            "out = /tmp/rows.csv\n"
            "cap_isosceles = 5000   # trailing comment\n"
            "cap_instance = 100000\n");
        SweepConfig cfg = load_sweep_config(in);
        CHECK(cfg.primes == std::vector<std::uint32_t>{5, 7, 13});
        CHECK(cfg.sizes == std::vector<std::uint32_t>{2, 3});
        REQUIRE(cfg.specs.size() == 3);
        CHECK(to_string(cfg.specs[1]) == "ap:1:3");
        CHECK(cfg.master_seed == 42);
        CHECK(cfg.out_path == "/tmp/rows.csv");
        CHECK(cfg.caps.isosceles_points == 5000);
        CHECK(cfg.caps.instance == 100000);
        CHECK(cfg.caps.pairs == kDefaultPairCap);  // untouched keys keep defaults
    }
    SUBCASE("rejects with the offending line number") {
        std::istringstream bad1("primes = 4\n");
        CHECK_THROWS_WITH_AS(load_sweep_config(bad1),
                             doctest::Contains("line 1"), std::invalid_argument);
        std::istringstream bad2("primes = 5\nwhatever = 3\n");
        CHECK_THROWS_WITH_AS(load_sweep_config(bad2),
                             doctest::Contains("line 2"), std::invalid_argument);
        std::istringstream bad3("sizes: 2\n");
        CHECK_THROWS_AS(load_sweep_config(bad3), std::invalid_argument);
        std::istringstream bad4("primes = 2147483648\n");
        CHECK_THROWS_AS(load_sweep_config(bad4), std::invalid_argument);
        std::istringstream bad5("specs = interval nope\n");
        CHECK_THROWS_AS(load_sweep_config(bad5), std::invalid_argument);
    }
}

TEST_CASE("run_sweep enumerates the cross product in order") {
    std::istringstream in(
        "primes = 7 5\n"
        "sizes = 3 2\n"
        "specs = interval ap:0:2\n"
        "seed = 9\n");
    SweepConfig cfg = load_sweep_config(in);
    SweepResult res = run_sweep(cfg);
    REQUIRE(res.rows.size() == 8);

    // Rows come back sorted by (p, |A|, spec index) regardless of config order.
    CHECK(res.rows[0].p == 5);
    CHECK(res.rows[0].size_a == 2);
    CHECK(res.rows[0].gen_label == "interval");
    CHECK(res.rows[1].gen_label == "ap:0:2");
    CHECK(res.rows[7].p == 7);
    CHECK(res.rows[7].size_a == 3);

    CHECK(res.error_rows == 0);
    CHECK(res.invariant_failures == 0);
    REQUIRE(res.min_theorem_ratio);
    CHECK(*res.min_theorem_ratio > 0.0);
    for (const CaseReport& row : res.rows) {
        CHECK_FALSE(row.seed.has_value());  // no random kinds in this sweep
        CHECK(row.error.empty());
    }
}

TEST_CASE("sweeps are byte-identical across thread counts") {
    std::istringstream in(
        "primes = 5 13 17\n"
        "sizes = 1 2 4\n"
        "specs = interval random gp:2:3\n"
        "seed = 777\n");
    SweepConfig cfg = load_sweep_config(in);
    std::string serial = sweep_to_csv(cfg, 1);
    CHECK(sweep_to_csv(cfg, 2) == serial);
    CHECK(sweep_to_csv(cfg, 8) == serial);

    // gp:2:3 cycles mod 13 after 3 elements (27 = 1), so size 4 errors there;
    // those rows carry the generate tag instead of dying.
    SweepResult res = run_sweep(cfg);
    bool saw_generate_error = false;
    for (const CaseReport& row : res.rows) {
        if (!row.error.empty()) {
            CHECK(row.error.find("generate:") == 0);
            saw_generate_error = true;
        }
        if (row.gen_label == "random" && row.error.empty()) CHECK(row.seed.has_value());
    }
    CHECK(saw_generate_error);
    CHECK(res.error_rows > 0);
    CHECK(res.invariant_failures == 0);
}

TEST_CASE("CSV layout") {
    CHECK(csv_header() ==
          "p,size_a,gen_kind,seed,delta_size,best_pin_x,best_pin_y,best_pin_size,"
          "guaranteed_bound_num,guaranteed_bound_den,n_total,n_restricted,n_degenerate,"
          "p_card,k_max,incidences,rudnev_ratio,theorem_ratio,flag_a_vs_p23,flag_p_vs_p2,"
          "error");

    PrimeModulus m(7);
    CaseReport row = run_case({0, 1, 2}, m);
    row.gen_label = "interval";
    std::string line = csv_row(row);
    CHECK(std::count(line.begin(), line.end(), ',') == 20);
    CHECK(line.substr(0, 13) == "7,3,interval,");
    CHECK(line.find("729,185") != std::string::npos);
    // Ratio fields print with exactly nine decimals.
    CHECK(line.find("0.962250449") != std::string::npos);

    SUBCASE("fields containing separators get quoted") {
        CaseReport dirty;
        dirty.p = 5;
        dirty.size_a = 2;
        dirty.gen_label = "list:0:1";
        dirty.error = "generate: a, b and \"c\"";
        std::string esc = csv_row(dirty);
        CHECK(esc.find("\"generate: a, b and \"\"c\"\"\"") != std::string::npos);
    }
}

TEST_CASE("exhaustive_verify") {
    SUBCASE("guard refuses big enumerations unless forced") {
        CHECK_THROWS_AS(exhaustive_verify(PrimeModulus(17), 3), cap_exceeded);
        CHECK_THROWS_AS(exhaustive_verify(PrimeModulus(7), 8), cap_exceeded);
        CHECK_NOTHROW(exhaustive_verify(PrimeModulus(5), 2));
    }
    SUBCASE("p = 5, all sizes: counts and witness recompute") {
        VerifyResult res = exhaustive_verify(PrimeModulus(5), 5);
        CHECK(res.cases == 31);  // sum of C(5, k) for k = 1..5
        CHECK(res.min_theorem_ratio > 0.0);
        REQUIRE_FALSE(res.witness.empty());

        PrimeModulus m(5);
        PointSet2 e = PointSet2::cartesian(res.witness, m);
        BestPin b = best_pin(e);
        CHECK(b.delta_size == res.witness_best_size);
        double denom = std::min(
            5.0, static_cast<double>(res.witness.size()) *
                     std::sqrt(static_cast<double>(res.witness.size())));
        CHECK(res.min_theorem_ratio ==
              doctest::Approx(res.witness_best_size / denom).epsilon(1e-8));
    }
    SUBCASE("affine symmetry reduction preserves the minimum") {
        VerifyResult full = exhaustive_verify(PrimeModulus(7), 4);
        VerifyResult reduced = exhaustive_verify(PrimeModulus(7), 4, false, true);
        CHECK(reduced.cases < full.cases);
        CHECK(reduced.min_theorem_ratio == doctest::Approx(full.min_theorem_ratio));
    }
}
