#pragma once

#include <cstdint>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

namespace d4ext {

using Int = mpz_class;
using Rat = mpq_class;

// floor(sqrt(n)) for n >= 0
inline Int isqrt(const Int& n) {
    if (n < 0) throw std::domain_error("isqrt: negative input");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

// root iff n is a perfect square (n >= 0), otherwise empty
inline std::optional<Int> is_perfect_square(const Int& n) {
    if (n < 0) return std::nullopt;
    if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return std::nullopt;
    return isqrt(n);
}

namespace detail {

// mod-64/63/65/11 quadratic-residue filters; rejects ~99% of non-squares
// before paying for a sqrt.
struct SquareFilter {
    uint64_t m64[1] = {0};
    uint64_t m63[1] = {0};
    uint64_t m65[2] = {0, 0};
    uint16_t m11 = 0;
    constexpr SquareFilter() {
        for (unsigned i = 0; i < 64; ++i) m64[0] |= uint64_t{1} << ((i * i) & 63);
        for (unsigned i = 0; i < 63; ++i) m63[0] |= uint64_t{1} << ((i * i) % 63);
        for (unsigned i = 0; i < 65; ++i) {
            unsigned r = (i * i) % 65;
            m65[r >> 6] |= uint64_t{1} << (r & 63);
        }
        for (unsigned i = 0; i < 11; ++i) m11 |= uint16_t{1} << ((i * i) % 11);
    }
    bool maybe_square(uint64_t n) const {
        if (!((m64[0] >> (n & 63)) & 1)) return false;
        uint64_t r63 = n % 63;
        if (!((m63[0] >> r63) & 1)) return false;
        uint64_t r65 = n % 65;
        if (!((m65[r65 >> 6] >> (r65 & 63)) & 1)) return false;
        return (m11 >> (n % 11)) & 1;
    }
};

inline const SquareFilter& square_filter() {
    static constexpr SquareFilter f{};
    return f;
}

} // namespace detail

// fast exact square test for machine-word values (hot loops of the oracles)
inline bool is_square_u64(uint64_t n, uint64_t* root = nullptr) {
    if (!detail::square_filter().maybe_square(n)) return false;
    uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    if (r * r == n) {
        if (root) *root = r;
        return true;
    }
    return false;
}

inline uint64_t isqrt_u64(uint64_t n) {
    uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// all t in [0, m) with t^2 = n (mod m), ascending.  Brute force; every
// modulus in the family enumeration is <= 812.
inline std::vector<Int> mod_sqrt_all(const Int& n, const Int& m) {
    if (m < 1) throw std::domain_error("mod_sqrt_all: modulus must be positive");
    Int nn = n % m;
    if (nn < 0) nn += m;
    std::vector<Int> out;
    for (Int t = 0; t < m; ++t) {
        if ((t * t - nn) % m == 0) out.push_back(t);
    }
    return out;
}

inline std::vector<long> mod_sqrt_all(long n, long m) {
    std::vector<Int> v = mod_sqrt_all(Int(n), Int(m));
    std::vector<long> out;
    out.reserve(v.size());
    for (const auto& t : v) out.push_back(t.get_si());
    return out;
}

} // namespace d4ext
