#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include <mpfr.h>

#include "d4ext/bigarith/int.hpp"

namespace d4ext {

// Escalation could not decide a comparison/expansion at the current
// working precision; callers retry with more bits.
struct Undecided : std::runtime_error {
    explicit Undecided(const std::string& what) : std::runtime_error(what) {}
};

struct PrecisionExhausted : std::runtime_error {
    explicit PrecisionExhausted(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr long kPrecisionCapBits = 1L << 20;

// Interval with exact dyadic endpoints (arbitrary-precision binary
// floats), lo <= true value <= hi.  Every operation rounds outward, so
// containment of the exact real value is unconditional.
class Enclosure {
  public:
    Enclosure() : prec_(64) { init(); }

    explicit Enclosure(long prec) : prec_(clamp_prec(prec)) { init(); }

    Enclosure(const Enclosure& o) : prec_(o.prec_) {
        init();
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }

    Enclosure(Enclosure&& o) noexcept : prec_(o.prec_) {
        lo_[0] = o.lo_[0];
        hi_[0] = o.hi_[0];
        o.moved_ = true;
    }

    Enclosure& operator=(Enclosure o) noexcept {
        std::swap(prec_, o.prec_);
        std::swap(lo_[0], o.lo_[0]);
        std::swap(hi_[0], o.hi_[0]);
        std::swap(moved_, o.moved_);
        return *this;
    }

    ~Enclosure() {
        if (!moved_) {
            mpfr_clear(lo_);
            mpfr_clear(hi_);
        }
    }

    static Enclosure from_int(const Int& v, long prec) {
        Enclosure e(prec);
        mpfr_set_z(e.lo_, v.get_mpz_t(), MPFR_RNDD);
        mpfr_set_z(e.hi_, v.get_mpz_t(), MPFR_RNDU);
        return e;
    }

    static Enclosure from_long(long v, long prec) { return from_int(Int(v), prec); }

    static Enclosure from_rat(const Rat& v, long prec) {
        Enclosure e(prec);
        mpfr_set_q(e.lo_, v.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(e.hi_, v.get_mpq_t(), MPFR_RNDU);
        return e;
    }

    // parses a decimal literal outward (for frozen test constants)
    static Enclosure from_decimal(const std::string& s, long prec) {
        Enclosure e(prec);
        mpfr_set_str(e.lo_, s.c_str(), 10, MPFR_RNDD);
        mpfr_set_str(e.hi_, s.c_str(), 10, MPFR_RNDU);
        return e;
    }

    static Enclosure from_endpoints(const Rat& lo, const Rat& hi, long prec) {
        if (lo > hi) throw std::invalid_argument("Enclosure: lo > hi");
        Enclosure e(prec);
        mpfr_set_q(e.lo_, lo.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(e.hi_, hi.get_mpq_t(), MPFR_RNDU);
        return e;
    }

    long prec() const { return prec_; }

    // exact rational endpoints (mpfr values are dyadic rationals)
    Rat lo_rat() const {
        Rat q;
        mpfr_get_q(q.get_mpq_t(), lo_);
        return q;
    }
    Rat hi_rat() const {
        Rat q;
        mpfr_get_q(q.get_mpq_t(), hi_);
        return q;
    }

    double lo_d() const { return mpfr_get_d(lo_, MPFR_RNDD); }
    double hi_d() const { return mpfr_get_d(hi_, MPFR_RNDU); }

    Enclosure operator+(const Enclosure& o) const {
        Enclosure r(std::max(prec_, o.prec_));
        mpfr_add(r.lo_, lo_, o.lo_, MPFR_RNDD);
        mpfr_add(r.hi_, hi_, o.hi_, MPFR_RNDU);
        return r;
    }

    Enclosure operator-(const Enclosure& o) const {
        Enclosure r(std::max(prec_, o.prec_));
        mpfr_sub(r.lo_, lo_, o.hi_, MPFR_RNDD);
        mpfr_sub(r.hi_, hi_, o.lo_, MPFR_RNDU);
        return r;
    }

    Enclosure operator-() const {
        Enclosure r(prec_);
        mpfr_neg(r.lo_, hi_, MPFR_RNDD);
        mpfr_neg(r.hi_, lo_, MPFR_RNDU);
        return r;
    }

    Enclosure operator*(const Enclosure& o) const {
        Enclosure r(std::max(prec_, o.prec_));
        mpfr_t t;
        mpfr_init2(t, r.prec_);
        // lo: min of the four products rounded down
        mpfr_mul(r.lo_, lo_, o.lo_, MPFR_RNDD);
        mpfr_mul(t, lo_, o.hi_, MPFR_RNDD);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        mpfr_mul(t, hi_, o.lo_, MPFR_RNDD);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        mpfr_mul(t, hi_, o.hi_, MPFR_RNDD);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        // hi: max of the four products rounded up
        mpfr_mul(r.hi_, lo_, o.lo_, MPFR_RNDU);
        mpfr_mul(t, lo_, o.hi_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        mpfr_mul(t, hi_, o.lo_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        mpfr_mul(t, hi_, o.hi_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        mpfr_clear(t);
        return r;
    }

    Enclosure operator/(const Enclosure& o) const {
        if (o.contains_zero()) throw Undecided("Enclosure division: divisor interval contains zero");
        Enclosure r(std::max(prec_, o.prec_));
        mpfr_t t;
        mpfr_init2(t, r.prec_);
        mpfr_div(r.lo_, lo_, o.lo_, MPFR_RNDD);
        mpfr_div(t, lo_, o.hi_, MPFR_RNDD);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        mpfr_div(t, hi_, o.lo_, MPFR_RNDD);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        mpfr_div(t, hi_, o.hi_, MPFR_RNDD);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        mpfr_div(r.hi_, lo_, o.lo_, MPFR_RNDU);
        mpfr_div(t, lo_, o.hi_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        mpfr_div(t, hi_, o.lo_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        mpfr_div(t, hi_, o.hi_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        mpfr_clear(t);
        return r;
    }

    Enclosure sqrt() const {
        if (mpfr_sgn(hi_) < 0) throw std::domain_error("Enclosure sqrt: interval entirely negative");
        if (mpfr_sgn(lo_) < 0) throw Undecided("Enclosure sqrt: interval straddles zero");
        Enclosure r(prec_);
        mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
        mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
        return r;
    }

    Enclosure log() const {
        if (mpfr_sgn(hi_) <= 0) throw std::domain_error("Enclosure log: interval entirely nonpositive");
        if (mpfr_sgn(lo_) <= 0) throw Undecided("Enclosure log: interval touches zero");
        Enclosure r(prec_);
        mpfr_log(r.lo_, lo_, MPFR_RNDD);
        mpfr_log(r.hi_, hi_, MPFR_RNDU);
        return r;
    }

    Enclosure exp() const {
        Enclosure r(prec_);
        mpfr_exp(r.lo_, lo_, MPFR_RNDD);
        mpfr_exp(r.hi_, hi_, MPFR_RNDU);
        return r;
    }

    Enclosure abs() const {
        Enclosure r(prec_);
        if (mpfr_sgn(lo_) >= 0) return *this;
        if (mpfr_sgn(hi_) <= 0) return -*this;
        mpfr_set_zero(r.lo_, 1);
        mpfr_neg(r.hi_, lo_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, hi_, MPFR_RNDU);
        return r;
    }

    // integer power by repeated interval multiplication (n >= 0)
    Enclosure pow_ui(unsigned long n) const {
        Enclosure acc = from_long(1, prec_);
        Enclosure base = *this;
        while (n > 0) {
            if (n & 1) acc = acc * base;
            base = base * base;
            n >>= 1;
        }
        return acc;
    }

    bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
    int sign_lo() const { return mpfr_sgn(lo_); }
    int sign_hi() const { return mpfr_sgn(hi_); }

    bool definitely_positive() const { return mpfr_sgn(lo_) > 0; }
    bool definitely_negative() const { return mpfr_sgn(hi_) < 0; }

    // certified strict comparison: every point of *this below every point of o
    bool definitely_less(const Enclosure& o) const { return mpfr_cmp(hi_, o.lo_) < 0; }
    bool definitely_greater_eq(const Enclosure& o) const { return mpfr_cmp(lo_, o.hi_) >= 0; }

    // exact comparisons against rationals/integers (independent of precision)
    bool definitely_less(const Rat& q) const { return mpfr_cmp_q(hi_, const_cast<mpq_srcptr>(q.get_mpq_t())) < 0; }
    bool definitely_greater(const Rat& q) const { return mpfr_cmp_q(lo_, const_cast<mpq_srcptr>(q.get_mpq_t())) > 0; }
    bool definitely_less_eq(const Rat& q) const { return mpfr_cmp_q(hi_, const_cast<mpq_srcptr>(q.get_mpq_t())) <= 0; }
    bool definitely_greater_eq(const Rat& q) const { return mpfr_cmp_q(lo_, const_cast<mpq_srcptr>(q.get_mpq_t())) >= 0; }

    bool contains(const Rat& q) const {
        return mpfr_cmp_q(lo_, const_cast<mpq_srcptr>(q.get_mpq_t())) <= 0 &&
               mpfr_cmp_q(hi_, const_cast<mpq_srcptr>(q.get_mpq_t())) >= 0;
    }

    bool contained_in(const Enclosure& o) const {
        return mpfr_cmp(o.lo_, lo_) <= 0 && mpfr_cmp(hi_, o.hi_) <= 0;
    }

    Rat width() const { return hi_rat() - lo_rat(); }

    // floor of every point, when it is the same integer for the whole interval
    std::optional<Int> certain_floor() const {
        Int fl = floor_lo();
        Int fh = floor_hi();
        if (fl == fh) return fl;
        return std::nullopt;
    }

    Int floor_lo() const {
        mpfr_t t;
        mpfr_init2(t, mpfr_get_prec(lo_));
        mpfr_floor(t, lo_);
        Int z;
        mpfr_get_z(z.get_mpz_t(), t, MPFR_RNDD);
        mpfr_clear(t);
        return z;
    }

    Int floor_hi() const {
        mpfr_t t;
        mpfr_init2(t, mpfr_get_prec(hi_));
        mpfr_floor(t, hi_);
        Int z;
        mpfr_get_z(z.get_mpz_t(), t, MPFR_RNDU);
        mpfr_clear(t);
        return z;
    }

    std::string str(size_t digits = 20) const {
        auto one = [&](mpfr_srcptr v, mpfr_rnd_t rnd) {
            char* s = nullptr;
            mpfr_asprintf(&s, "%.*R*g", static_cast<int>(digits), rnd, v);
            std::string out(s);
            mpfr_free_str(s);
            return out;
        };
        return "[" + one(lo_, MPFR_RNDD) + ", " + one(hi_, MPFR_RNDU) + "]";
    }

  private:
    static long clamp_prec(long p) {
        if (p < 2) p = 2;
        if (p > kPrecisionCapBits)
            throw PrecisionExhausted("Enclosure precision above hard cap of 2^20 bits");
        return p;
    }

    void init() {
        mpfr_init2(lo_, prec_);
        mpfr_init2(hi_, prec_);
        mpfr_set_nan(lo_);
        mpfr_set_nan(hi_);
    }

    long prec_;
    bool moved_ = false;
    mpfr_t lo_;
    mpfr_t hi_;
};

inline Enclosure operator*(long k, const Enclosure& e) {
    return Enclosure::from_long(k, e.prec()) * e;
}

inline Enclosure operator+(long k, const Enclosure& e) {
    return Enclosure::from_long(k, e.prec()) + e;
}

inline Enclosure operator-(long k, const Enclosure& e) {
    return Enclosure::from_long(k, e.prec()) - e;
}

// Runs f(prec) with doubling precision until it stops throwing Undecided.
// The hard cap matches the bigarith design budget (~2 log10(6M) digits is
// tiny compared to 2^20 bits).
template <typename F>
auto with_escalation(long start_bits, F&& f, long cap_bits = kPrecisionCapBits) {
    long prec = std::max(start_bits, 8L);
    std::string last;
    while (prec <= cap_bits) {
        try {
            return f(prec);
        } catch (const Undecided& u) {
            last = u.what();
            prec *= 2;
        }
    }
    throw PrecisionExhausted("precision cap 2^20 bits reached without deciding: " + last);
}

inline Int rat_floor(const Rat& v) {
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), v.get_num().get_mpz_t(), v.get_den().get_mpz_t());
    return fl;
}

// enclosure of min over integers z of |x - z|; always inside [0, 1/2].
// Exact endpoint arithmetic (the certificate of the reduction step is
// re-verified through this).
inline Enclosure nearest_integer_distance(const Enclosure& x) {
    const Rat lo = x.lo_rat();
    const Rat hi = x.hi_rat();
    const Rat half(1, 2);
    if (hi - lo >= 1)
        return Enclosure::from_endpoints(Rat(0), half, std::max(x.prec(), 64L));
    auto dist = [](const Rat& v) -> Rat {
        Rat frac = v - Rat(rat_floor(v)); // in [0,1)
        Rat alt = Rat(1) - frac;
        return std::min(frac, alt);
    };
    const Rat dlo = dist(lo), dhi = dist(hi);
    // an integer inside pulls the min to 0; a half-integer pushes the max
    // to 1/2; interval width < 1 so at most two multiples of 1/2 lie inside
    bool contains_int = false, contains_halfint = false;
    Int k = rat_floor(2 * lo);
    for (int i = 0; i < 4; ++i, k += 1) {
        Rat v = Rat(k) / 2;
        if (v < lo || v > hi) continue;
        if (k % 2 == 0) contains_int = true;
        else contains_halfint = true;
    }
    Rat out_lo = contains_int ? Rat(0) : std::min(dlo, dhi);
    Rat out_hi = contains_halfint ? half : std::max(dlo, dhi);
    if (out_hi > half) out_hi = half;
    if (out_lo > out_hi) out_lo = out_hi;
    return Enclosure::from_endpoints(out_lo, out_hi, std::max(x.prec(), 64L));
}

} // namespace d4ext
