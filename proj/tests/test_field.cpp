#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <vector>

#include "pindist/field.hpp"
#include "pindist/parallel.hpp"
#include "pindist/rng.hpp"

using namespace pindist;

namespace {

// Independent primality oracle for the is_prime check.
std::vector<bool> sieve(std::uint32_t limit) {
    std::vector<bool> prime(limit + 1, true);
    prime[0] = false;
    if (limit >= 1) prime[1] = false;
    for (std::uint32_t i = 2; i * i <= limit; ++i) {
        if (!prime[i]) continue;
        for (std::uint32_t j = i * i; j <= limit; j += i) prime[j] = false;
    }
    return prime;
}

const std::vector<std::uint32_t> kTestPrimes = {3, 5, 7, 11, 13, 17, 101};

}  // namespace

TEST_CASE("is_prime agrees with a sieve up to 2000") {
    std::vector<bool> oracle = sieve(2000);
    for (std::uint32_t n = 0; n <= 2000; ++n) {
        CAPTURE(n);
        CHECK(is_prime(n) == oracle[n]);
    }
    CHECK(is_prime(2147483647));  // 2^31 - 1
    CHECK_FALSE(is_prime(2147483645));
}

TEST_CASE("PrimeModulus rejects bad moduli") {
    CHECK_THROWS_AS(PrimeModulus(0), std::invalid_argument);
    CHECK_THROWS_AS(PrimeModulus(1), std::invalid_argument);
    CHECK_THROWS_AS(PrimeModulus(2), std::invalid_argument);  // odd primes only
    CHECK_THROWS_AS(PrimeModulus(4), std::invalid_argument);
    CHECK_THROWS_AS(PrimeModulus(91), std::invalid_argument);  // 7 * 13
    CHECK_THROWS_AS(PrimeModulus(2147483647u + 2u), std::invalid_argument);  // >= 2^31
    CHECK(PrimeModulus(2147483647).value() == 2147483647u);
}

TEST_CASE("field operations match plain int64 arithmetic, exhaustively") {
    for (std::uint32_t p : kTestPrimes) {
        PrimeModulus m(p);
        for (std::uint32_t a = 0; a < p; ++a) {
            for (std::uint32_t b = 0; b < p; ++b) {
                CAPTURE(p);
                CAPTURE(a);
                CAPTURE(b);
                CHECK(m.add(a, b) == (a + b) % p);
                CHECK(m.sub(a, b) == (a + p - b) % p);
                CHECK(m.mul(a, b) ==
                      static_cast<std::uint64_t>(a) * b % p);
            }
            CHECK(m.add(a, m.neg(a)) == 0);
            if (a != 0) CHECK(m.mul(a, m.inv(a)) == 1);
        }
        CHECK_THROWS_AS(m.inv(0), std::invalid_argument);
    }
}

TEST_CASE("reduce maps any int64 into [0, p)") {
    PrimeModulus m(13);
    CHECK(m.reduce(0) == 0);
    CHECK(m.reduce(13) == 0);
    CHECK(m.reduce(-1) == 12);
    CHECK(m.reduce(-26) == 0);
    CHECK(m.reduce(27) == 1);
    CHECK(m.reduce(std::numeric_limits<std::int64_t>::min()) < 13);
    CHECK(m.reduce(std::numeric_limits<std::int64_t>::max()) < 13);
}

TEST_CASE("pow matches repeated multiplication") {
    for (std::uint32_t p : {5u, 13u}) {
        PrimeModulus m(p);
        for (std::uint32_t a = 0; a < p; ++a) {
            Residue acc = 1;
            for (std::uint64_t e = 0; e <= 2 * p; ++e) {
                CAPTURE(p);
                CAPTURE(a);
                CAPTURE(e);
                CHECK(m.pow(a, e) == acc);
                acc = m.mul(acc, a);
            }
        }
    }
    // Fermat: a^(p-1) = 1 for a != 0.
    PrimeModulus big(1000003);
    for (Residue a : {2u, 999u, 1000002u}) CHECK(big.pow(a, big.value() - 1) == 1);
}

TEST_CASE("legendre_symbol counts square roots") {
    for (std::uint32_t p : kTestPrimes) {
        PrimeModulus m(p);
        for (Residue a = 0; a < p; ++a) {
            int roots = 0;
            for (Residue x = 0; x < p; ++x) {
                if (m.mul(x, x) == a) ++roots;
            }
            CAPTURE(p);
            CAPTURE(a);
            int expected = a == 0 ? 0 : (roots == 2 ? 1 : -1);
            CHECK(legendre_symbol(a, m) == expected);
        }
    }
    // -1 is a square exactly when p = 1 (mod 4).
    CHECK(legendre_symbol(12, PrimeModulus(13)) == 1);
    CHECK(legendre_symbol(6, PrimeModulus(7)) == -1);
}

TEST_CASE("sqrt_mod is exact and canonical") {
    SUBCASE("frozen values") {
        PrimeModulus m13(13);
        auto r = sqrt_mod(12, m13);  // -1 mod 13
        REQUIRE(r.has_value());
        CHECK(r->first == 5);
        CHECK(r->second == 8);
        r = sqrt_mod(4, m13);
        REQUIRE(r.has_value());
        CHECK(r->first == 2);
        CHECK(r->second == 11);
        CHECK_FALSE(sqrt_mod(5, m13).has_value());
        auto z = sqrt_mod(0, m13);
        REQUIRE(z.has_value());
        CHECK(z->first == 0);
        CHECK(z->second == 0);
    }
    SUBCASE("every residue, several primes") {
        for (std::uint32_t p : kTestPrimes) {
            PrimeModulus m(p);
            for (Residue a = 0; a < p; ++a) {
                CAPTURE(p);
                CAPTURE(a);
                auto r = sqrt_mod(a, m);
                if (legendre_symbol(a, m) == -1) {
                    CHECK_FALSE(r.has_value());
                    continue;
                }
                REQUIRE(r.has_value());
                CHECK(m.mul(r->first, r->first) == a);
                CHECK(m.mul(r->second, r->second) == a);
                CHECK(r->first <= r->second);
                if (a != 0) CHECK(m.add(r->first, r->second) == 0);
            }
        }
    }
    SUBCASE("p = 1 (mod 4), nontrivial two-adic part") {
        PrimeModulus m(1000033);  // 1000032 = 2^5 * 3 * 11 * 947
        for (Residue a : {2u, 3u, 123456u, 999999u}) {
            Residue sq = m.mul(a, a);
            auto r = sqrt_mod(sq, m);
            REQUIRE(r.has_value());
            CHECK(m.mul(r->first, r->first) == sq);
        }
    }
}

TEST_CASE("isotropic directions exist exactly when -1 is a square") {
    PrimeModulus m5(5);
    CHECK(is_isotropic_direction(1, 2, m5));  // 1 + 4 = 5 = 0
    CHECK(is_isotropic_direction(1, 3, m5));
    CHECK_FALSE(is_isotropic_direction(1, 1, m5));
    CHECK_THROWS_AS(is_isotropic_direction(0, 0, m5), std::invalid_argument);

    PrimeModulus m7(7);
    for (Residue dx = 0; dx < 7; ++dx) {
        for (Residue dy = 0; dy < 7; ++dy) {
            if (dx == 0 && dy == 0) continue;
            CHECK_FALSE(is_isotropic_direction(dx, dy, m7));
        }
    }
}

TEST_CASE("SplitMix64 reference values and bounded rejection") {
    // First outputs for seed 0, from the published splitmix64 stream.
    SplitMix64 rng(0);
    CHECK(rng.next() == 0xe220a8397b1dcdafULL);
    CHECK(rng.next() == 0x6e789e6aa1b965f4ULL);
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);

    SplitMix64 r2(42);
    for (int i = 0; i < 1000; ++i) {
        CHECK(r2.bounded(7) < 7);
        CHECK(r2.bounded(1) == 0);
    }
}

TEST_CASE("thread budget respects PINDIST_THREADS") {
    unsetenv("PINDIST_THREADS");
    int base = thread_budget();
    CHECK(base >= 1);

    setenv("PINDIST_THREADS", "1", 1);
    CHECK(thread_budget() == 1);

    setenv("PINDIST_THREADS", "junk", 1);
    CHECK_THROWS_AS(thread_budget(), std::invalid_argument);
    setenv("PINDIST_THREADS", "0", 1);
    CHECK_THROWS_AS(thread_budget(), std::invalid_argument);

    unsetenv("PINDIST_THREADS");
    CHECK(resolve_threads(0) == thread_budget());
    CHECK(resolve_threads(3) == 3);
    CHECK(resolve_threads(-2) == thread_budget());
}
