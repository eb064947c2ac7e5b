#pragma once

#include <cstdint>
#include <optional>
#include <utility>

namespace pindist {

// Canonical representative of an element of F_p, always in [0, p).
using Residue = std::uint32_t;

bool is_prime(std::uint32_t n);

// An odd prime modulus p with 3 <= p < 2^31, so products of two canonical
// residues fit in 62 bits and dx^2 + dy^2 fits in 63 before reduction.
class PrimeModulus {
public:
    explicit PrimeModulus(std::uint32_t p);

    std::uint32_t value() const { return p_; }

    Residue reduce(std::int64_t v) const {
        std::int64_t r = v % static_cast<std::int64_t>(p_);
        if (r < 0) r += p_;
        return static_cast<Residue>(r);
    }

    Residue add(Residue a, Residue b) const {
        std::uint32_t s = a + b;  // < 2^32, no overflow for p < 2^31
        return s >= p_ ? s - p_ : s;
    }

    Residue sub(Residue a, Residue b) const {
        return a >= b ? a - b : a + p_ - b;
    }

    Residue neg(Residue a) const { return a == 0 ? 0 : p_ - a; }

    Residue mul(Residue a, Residue b) const {
        return static_cast<Residue>(static_cast<std::uint64_t>(a) * b % p_);
    }

    Residue pow(Residue base, std::uint64_t exp) const;

    // Multiplicative inverse; throws std::invalid_argument on 0.
    Residue inv(Residue a) const;

    bool operator==(const PrimeModulus&) const = default;

private:
    std::uint32_t p_;
};

// Euler's criterion: 0 iff a = 0, 1 iff a is a nonzero square mod p, -1 otherwise.
int legendre_symbol(Residue a, const PrimeModulus& m);

// Square roots of a mod p. Returns (0,0) for a = 0, the root pair {r, p-r}
// with r <= p-r for a nonzero square, and nullopt for a non-residue.
// Tonelli-Shanks with the smallest non-residue as helper, so deterministic.
std::optional<std::pair<Residue, Residue>> sqrt_mod(Residue a, const PrimeModulus& m);

// True iff dx^2 + dy^2 = 0 in F_p. The zero direction is rejected.
bool is_isotropic_direction(Residue dx, Residue dy, const PrimeModulus& m);

}  // namespace pindist
