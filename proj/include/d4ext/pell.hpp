#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "d4ext/dtuples.hpp"

namespace d4ext {

// One fundamental solution of a z^2 - c x^2 = 4(a-c) (kind zx) or
// b z^2 - c y^2 = 4(b-c) (kind zy); sign data preserved.
struct FundamentalSolution {
    enum class Kind { zx, zy };
    Kind kind;
    Int z;      // z0 or z1
    Int other;  // x0 or y1
};

// All integer solutions inside the fundamental-solution boxes:
//   c > first:  2 <= other < sqrt(s+2),  2 <= |z| < sqrt(c sqrt(c)/sqrt(first))
//   c < first:  2 <= z < sqrt(s+2),      2 <= |other| < sqrt(first^1.5/sqrt(c))
// where (first, s) = (a, s) for zx and (b, t) for zy.
inline std::vector<FundamentalSolution> fundamental_solutions(FundamentalSolution::Kind kind,
                                                              const DnTriple& tr) {
    const Int& first = kind == FundamentalSolution::Kind::zx ? tr.a() : tr.b();
    const Int& root = kind == FundamentalSolution::Kind::zx ? tr.s : tr.t;
    const Int& c = tr.c;
    if (c == first) throw std::logic_error("fundamental_solutions: degenerate c == element");

    std::vector<FundamentalSolution> out;
    // iterate the positive-bounded component over [2, sqrt(root+2)), i.e.
    // value^2 <= root+1, and solve the quadratic for the signed one
    Int iter_max_sq = root + 1;
    if (c > first) {
        // other = x0 (or y1) positive, z signed
        for (Int o = 2; o * o <= iter_max_sq; ++o) {
            Int num = c * o * o + 4 * (first - c);
            if (num <= 0 || num % first != 0) continue;
            auto z = is_perfect_square(num / first);
            if (!z || *z < 2) continue;
            // |z|^2 < sqrt(c^3/first)  <=>  first * z^4 < c^3
            Int z4 = (*z) * (*z) * (*z) * (*z);
            if (!(first * z4 < c * c * c)) continue;
            out.push_back({kind, *z, o});
            out.push_back({kind, -*z, o});
        }
    } else {
        // z positive, other signed
        for (Int z = 2; z * z <= iter_max_sq; ++z) {
            Int num = first * z * z - 4 * (first - c);
            if (num <= 0 || num % c != 0) continue;
            auto o = is_perfect_square(num / c);
            if (!o || *o < 2) continue;
            Int o4 = (*o) * (*o) * (*o) * (*o);
            if (!(c * o4 < first * first * first)) continue;
            out.push_back({kind, z, *o});
            out.push_back({kind, z, -*o});
        }
    }
    std::sort(out.begin(), out.end(), [](const FundamentalSolution& p, const FundamentalSolution& q) {
        return std::tie(p.z, p.other) < std::tie(q.z, q.other);
    });
    return out;
}

// v_{k+2} = coeff v_{k+1} - v_k, exact terms
struct SolutionSequence {
    Int term0;
    Int term1;
    Int coeff;

    std::vector<Int> terms(size_t count) const {
        std::vector<Int> out;
        out.reserve(count);
        if (count >= 1) out.push_back(term0);
        if (count >= 2) out.push_back(term1);
        while (out.size() < count) {
            size_t k = out.size();
            out.push_back(coeff * out[k - 1] - out[k - 2]);
        }
        return out;
    }
};

inline std::vector<Int> recurrence_sequence(const Int& term0, const Int& term1, const Int& coeff,
                                            size_t count) {
    return SolutionSequence{term0, term1, coeff}.terms(count);
}

// a matched pair of fundamental solutions feeding the v and w sequences
struct FundPair {
    Int z0, x0;  // zx equation
    Int z1, y1;  // zy equation
};

// v0 = z0, v1 = (s z0 + c x0)/2; parity of valid fundamental solutions
// guarantees integrality, a violation is a bug upstream
inline SolutionSequence v_sequence(const DnTriple& tr, const FundPair& f) {
    Int num = tr.s * f.z0 + tr.c * f.x0;
    if (num % 2 != 0) throw std::logic_error("v_sequence: non-integral v1");
    return {f.z0, num / 2, tr.s};
}

inline SolutionSequence w_sequence(const DnTriple& tr, const FundPair& f) {
    Int num = tr.t * f.z1 + tr.c * f.y1;
    if (num % 2 != 0) throw std::logic_error("w_sequence: non-integral w1");
    return {f.z1, num / 2, tr.t};
}

enum class ParityClass { EvenEven, OddOdd, Mixed, Any };

inline std::string to_string(ParityClass p) {
    switch (p) {
        case ParityClass::EvenEven: return "even-even";
        case ParityClass::OddOdd: return "odd-odd";
        case ParityClass::Mixed: return "mixed";
        case ParityClass::Any: return "any";
    }
    return "?";
}

struct IntersectionCase {
    CLabel c_label;
    ParityClass parity;
    std::vector<FundPair> combos;  // concrete sign choices allowed by Lemma 1
    bool admissible = false;
    std::string constraint;  // human-readable statement of the Lemma 1 clause
};

// Lemma 1 admissibility of a parity class for a given c label (mixed
// parity never yields intersections for any of the seven labels).
inline bool parity_class_admissible(CLabel label, ParityClass parity) {
    switch (parity) {
        case ParityClass::EvenEven: return true;
        case ParityClass::OddOdd:
            return label != CLabel::C1m && label != CLabel::C1p;
        default: return false;
    }
}

// The admissible intersection cases of Lemma 1, with the concrete
// fundamental-solution combinations that satisfy the stated constraints.
// Cases whose constraint matches no actual fundamental solution are
// dropped (nothing to search).
inline std::vector<IntersectionCase> admissible_cases(const DnTriple& tr, CLabel label) {
    auto zx = fundamental_solutions(FundamentalSolution::Kind::zx, tr);
    auto zy = fundamental_solutions(FundamentalSolution::Kind::zy, tr);

    std::vector<IntersectionCase> out;

    // even/even: z0 = z1 and |z0| = 2 (z0 = z1 = 2 when c = c1-)
    IntersectionCase even{label, ParityClass::EvenEven, {}, true,
                          label == CLabel::C1m ? "z0 = z1 = 2" : "z0 = z1, |z0| = 2"};
    for (const auto& f0 : zx) {
        if (abs(f0.z) != 2) continue;
        if (label == CLabel::C1m && f0.z != 2) continue;
        for (const auto& f1 : zy) {
            if (f1.z != f0.z) continue;
            even.combos.push_back({f0.z, f0.other, f1.z, f1.other});
        }
    }
    if (!even.combos.empty()) out.push_back(std::move(even));

    if (parity_class_admissible(label, ParityClass::OddOdd)) {
        IntersectionCase odd{label, ParityClass::OddOdd, {}, true,
                             "|z0| = t, |z1| = s, z0 z1 > 0"};
        for (const auto& f0 : zx) {
            if (abs(f0.z) != tr.t) continue;
            for (const auto& f1 : zy) {
                if (abs(f1.z) != tr.s) continue;
                if (f0.z * f1.z <= 0) continue;
                odd.combos.push_back({f0.z, f0.other, f1.z, f1.other});
            }
        }
        if (!odd.combos.empty()) out.push_back(std::move(odd));
    }
    return out;
}

// every fundamental combination, unfiltered; the oracle-equivalence
// tests search these with no parity restriction
inline IntersectionCase all_combinations_case(const DnTriple& tr, CLabel label = CLabel::C1m) {
    auto zx = fundamental_solutions(FundamentalSolution::Kind::zx, tr);
    auto zy = fundamental_solutions(FundamentalSolution::Kind::zy, tr);
    IntersectionCase c{label, ParityClass::Any, {}, true, "unfiltered"};
    for (const auto& f0 : zx)
        for (const auto& f1 : zy) c.combos.push_back({f0.z, f0.other, f1.z, f1.other});
    return c;
}

struct IntersectionHit {
    long m;
    long n;
    Int z;
    FundPair combo;
};

namespace detail {

inline bool parity_match(ParityClass p, long m, long n) {
    switch (p) {
        case ParityClass::EvenEven: return m % 2 == 0 && n % 2 == 0;
        case ParityClass::OddOdd: return m % 2 == 1 && n % 2 == 1;
        case ParityClass::Mixed: return (m % 2) != (n % 2);
        case ParityClass::Any: return true;
    }
    return false;
}

} // namespace detail

// all v_m = w_n with m, n <= index_cap in the case's parity class.
// Degenerate z with z^2 = 4 (the d = 0 extension) is not reported.
inline std::vector<IntersectionHit> find_intersections(const DnTriple& tr,
                                                       const IntersectionCase& cse,
                                                       long index_cap) {
    std::vector<IntersectionHit> hits;
    for (const auto& combo : cse.combos) {
        auto v = v_sequence(tr, combo).terms(index_cap + 1);
        auto w = w_sequence(tr, combo).terms(index_cap + 1);
        // sequences are strictly increasing once positive; sort by value to
        // be safe about the short pre-positive prefix
        std::vector<std::pair<Int, long>> sv, sw;
        for (long i = 0; i <= index_cap; ++i) sv.push_back({v[i], i});
        for (long i = 0; i <= index_cap; ++i) sw.push_back({w[i], i});
        std::stable_sort(sv.begin(), sv.end(),
                         [](const auto& x, const auto& y) { return x.first < y.first; });
        std::stable_sort(sw.begin(), sw.end(),
                         [](const auto& x, const auto& y) { return x.first < y.first; });
        size_t i = 0, j = 0;
        while (i < sv.size() && j < sw.size()) {
            if (sv[i].first < sw[j].first) { ++i; continue; }
            if (sw[j].first < sv[i].first) { ++j; continue; }
            // equal value: emit all index pairs for this value
            size_t i2 = i, j2 = j;
            while (i2 < sv.size() && sv[i2].first == sv[i].first) ++i2;
            while (j2 < sw.size() && sw[j2].first == sw[j].first) ++j2;
            const Int& z = sv[i].first;
            if (z * z != 4) {
                for (size_t ii = i; ii < i2; ++ii)
                    for (size_t jj = j; jj < j2; ++jj)
                        if (detail::parity_match(cse.parity, sv[ii].second, sw[jj].second))
                            hits.push_back({sv[ii].second, sw[jj].second, z, combo});
            }
            i = i2;
            j = j2;
        }
    }
    std::sort(hits.begin(), hits.end(), [](const IntersectionHit& p, const IntersectionHit& q) {
        return std::tie(p.m, p.n, p.z) < std::tie(q.m, q.n, q.z);
    });
    return hits;
}

// d recovered from an intersection value z; nullopt for the degenerate
// z^2 = 4 (extension d = 0)
inline std::optional<Int> extension_from_z(const DnTriple& tr, const Int& z) {
    Int num = z * z - 4;
    if (num == 0) return std::nullopt;
    if (num % tr.c != 0) throw std::logic_error("extension_from_z: z^2 - 4 not divisible by c");
    return num / tr.c;
}

} // namespace d4ext
