#include "pindist/field.hpp"

#include <stdexcept>
#include <string>

namespace pindist {

bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

PrimeModulus::PrimeModulus(std::uint32_t p) : p_(p) {
    if (p >= (1u << 31)) {
        throw std::invalid_argument("modulus " + std::to_string(p) + " exceeds 2^31-1");
    }
    if (!is_prime(p)) {
        throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
    }
    if (p == 2) {
        throw std::invalid_argument("modulus 2 is rejected: the distance form needs odd characteristic");
    }
}

Residue PrimeModulus::pow(Residue base, std::uint64_t exp) const {
    std::uint64_t result = 1;
    std::uint64_t b = base % p_;
    while (exp > 0) {
        if (exp & 1) result = result * b % p_;
        b = b * b % p_;
        exp >>= 1;
    }
    return static_cast<Residue>(result);
}

Residue PrimeModulus::inv(Residue a) const {
    if (a == 0) throw std::invalid_argument("inverse of 0");
    return pow(a, p_ - 2);
}

int legendre_symbol(Residue a, const PrimeModulus& m) {
    if (a % m.value() == 0) return 0;
    Residue t = m.pow(a, (m.value() - 1) / 2);
    return t == 1 ? 1 : -1;
}

std::optional<std::pair<Residue, Residue>> sqrt_mod(Residue a, const PrimeModulus& m) {
    const std::uint32_t p = m.value();
    a %= p;
    if (a == 0) return std::make_pair(Residue{0}, Residue{0});
    if (legendre_symbol(a, m) != 1) return std::nullopt;

    Residue r;
    if (p % 4 == 3) {
        r = m.pow(a, (p + 1) / 4);
    } else {
        // Tonelli-Shanks. p - 1 = q * 2^s with q odd.
        std::uint32_t q = p - 1;
        unsigned s = 0;
        while (q % 2 == 0) {
            q /= 2;
            ++s;
        }
        Residue z = 2;
        while (legendre_symbol(z, m) != -1) ++z;

        Residue c = m.pow(z, q);
        Residue t = m.pow(a, q);
        r = m.pow(a, (q + 1) / 2);
        unsigned e = s;
        while (t != 1) {
            Residue u = t;
            unsigned i = 0;
            while (u != 1) {
                u = m.mul(u, u);
                ++i;
            }
            Residue b = c;
            for (unsigned j = 0; j + i + 1 < e; ++j) b = m.mul(b, b);
            r = m.mul(r, b);
            c = m.mul(b, b);
            t = m.mul(t, c);
            e = i;
        }
    }

    Residue other = m.neg(r);
    if (other < r) std::swap(r, other);
    return std::make_pair(r, other);
}

bool is_isotropic_direction(Residue dx, Residue dy, const PrimeModulus& m) {
    if (dx % m.value() == 0 && dy % m.value() == 0) {
        throw std::invalid_argument("the zero direction has no isotropy type");
    }
    return m.add(m.mul(dx, dx), m.mul(dy, dy)) == 0;
}

}  // namespace pindist
