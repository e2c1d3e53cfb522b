#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "d4ext/bigarith/enclosure.hpp"

namespace d4ext {

struct Convergent {
    Int p;
    Int q;
};

// Continued-fraction expansion of a certified real.  Expansion stops when
// the enclosure can no longer pin down a partial quotient (the interval
// straddles an integer), which the caller treats as an escalation signal.
struct ContinuedFractionState {
    std::vector<Int> partial_quotients;
    std::vector<Convergent> convergents;
    bool exact_termination = false;  // rational theta fully expanded
    bool insufficient_precision = false;
};

namespace detail {

inline void push_quotient(ContinuedFractionState& st, const Int& a) {
    st.partial_quotients.push_back(a);
    size_t n = st.convergents.size();
    Int p = a, q = 1;
    if (n == 1) {
        p = a * st.convergents[0].p + 1;
        q = a * st.convergents[0].q;
    } else if (n >= 2) {
        p = a * st.convergents[n - 1].p + st.convergents[n - 2].p;
        q = a * st.convergents[n - 1].q + st.convergents[n - 2].q;
    }
    st.convergents.push_back({p, q});
}

} // namespace detail

// exact Euclidean expansion of a rational theta
inline ContinuedFractionState expand_continued_fraction(
    const Rat& theta,
    const std::function<bool(const ContinuedFractionState&)>& stop,
    size_t max_terms = 100000) {
    ContinuedFractionState st;
    Rat x = theta;
    while (st.partial_quotients.size() < max_terms) {
        Int a = rat_floor(x);
        detail::push_quotient(st, a);
        Rat frac = x - Rat(a);
        if (frac == 0) {
            st.exact_termination = true;
            return st;
        }
        if (stop(st)) return st;
        x = Rat(1) / frac;
    }
    return st;
}

// Expands theta until stop(state) returns true.  A width-zero enclosure
// (a dyadic rational) delegates to the exact path; otherwise expansion
// runs on the interval and stops, flagged, once a partial quotient is no
// longer pinned down.
inline ContinuedFractionState expand_continued_fraction(
    const Enclosure& theta,
    const std::function<bool(const ContinuedFractionState&)>& stop,
    size_t max_terms = 100000) {
    ContinuedFractionState st;
    Rat lo = theta.lo_rat(), hi = theta.hi_rat();
    if (lo == hi) return expand_continued_fraction(lo, stop, max_terms);
    Rat xlo = lo, xhi = hi;
    while (st.partial_quotients.size() < max_terms) {
        Int alo = rat_floor(xlo), ahi = rat_floor(xhi);
        if (alo != ahi) {
            st.insufficient_precision = true;
            return st;
        }
        detail::push_quotient(st, alo);
        Rat flo = xlo - Rat(alo), fhi = xhi - Rat(alo);
        if (stop(st)) return st;
        if (flo <= 0) {
            // the interval touches the integer boundary: next quotient undecidable
            st.insufficient_precision = true;
            return st;
        }
        // invert: [flo, fhi] -> [1/fhi, 1/flo]
        Rat nlo = Rat(1) / fhi, nhi = Rat(1) / flo;
        xlo = nlo;
        xhi = nhi;
    }
    return st;
}

struct ConvergentResult {
    Int p;
    Int q;
};

// First convergent p/q of theta with q > q_min, certified to satisfy
// |theta - p/q| < 1/q^2 against the enclosure.  nullopt means the
// enclosure is too wide; escalate and retry.
inline std::optional<ConvergentResult> convergent_exceeding(const Enclosure& theta, const Int& q_min) {
    ContinuedFractionState st = expand_continued_fraction(
        theta, [&](const ContinuedFractionState& s) { return s.convergents.back().q > q_min; });
    if (st.convergents.empty() || st.convergents.back().q <= q_min) return std::nullopt;
    const Convergent& c = st.convergents.back();
    // certify |theta - p/q| < 1/q^2 on the exact endpoints
    Rat pq = Rat(c.p) / Rat(c.q);
    Rat dlo = abs(theta.lo_rat() - pq), dhi = abs(theta.hi_rat() - pq);
    Rat dev = std::max(dlo, dhi);
    if (!(dev < Rat(1) / Rat(c.q * c.q))) return std::nullopt;
    return ConvergentResult{c.p, c.q};
}

// exact-rational variant; nullopt when the full expansion never passes
// q_min (theta's denominator is too small)
inline std::optional<ConvergentResult> convergent_exceeding(const Rat& theta, const Int& q_min) {
    ContinuedFractionState st = expand_continued_fraction(
        theta, [&](const ContinuedFractionState& s) { return s.convergents.back().q > q_min; });
    if (st.convergents.empty() || st.convergents.back().q <= q_min) return std::nullopt;
    const Convergent& c = st.convergents.back();
    return ConvergentResult{c.p, c.q};
}

} // namespace d4ext
