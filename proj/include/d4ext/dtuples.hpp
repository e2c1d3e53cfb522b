#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "d4ext/bigarith/int.hpp"

namespace d4ext {

struct DnPair {
    Int n;  // the D(n) parameter; the campaign fixes n = 4
    Int a;
    Int b;
    Int r;  // ab + n = r^2
};

struct DnTriple {
    DnPair pair;
    Int c;  // may be smaller than a (the paper's c1- often is)
    Int s;  // ac + n = s^2
    Int t;  // bc + n = t^2
    const Int& a() const { return pair.a; }
    const Int& b() const { return pair.b; }
    const Int& n() const { return pair.n; }
};

struct DnQuadruple {
    DnTriple triple;
    Int d;
    Int x, y, z;  // ad+n = x^2, bd+n = y^2, cd+n = z^2
};

inline std::optional<DnPair> make_dn_pair(const Int& n, const Int& a, const Int& b) {
    if (a < 1 || b <= a) return std::nullopt;
    auto r = is_perfect_square(a * b + n);
    if (!r) return std::nullopt;
    return DnPair{n, a, b, *r};
}

// campaign scope: b > 10^4 and a < b < a + 57 sqrt(a), the latter as
// (b-a)^2 < 57^2 a
inline bool pair_in_scope(const DnPair& p) {
    if (p.b <= 10000) return false;
    Int gap = p.b - p.a;
    return gap * gap < 3249 * p.a;
}

inline std::optional<DnTriple> make_dn_triple(const DnPair& pair, const Int& c) {
    if (c < 1) return std::nullopt;
    auto s = is_perfect_square(pair.a * c + pair.n);
    if (!s) return std::nullopt;
    auto t = is_perfect_square(pair.b * c + pair.n);
    if (!t) return std::nullopt;
    return DnTriple{pair, c, *s, *t};
}

inline std::optional<DnQuadruple> make_dn_quadruple(const DnTriple& tr, const Int& d) {
    if (d < 1) return std::nullopt;
    auto x = is_perfect_square(tr.a() * d + tr.n());
    if (!x) return std::nullopt;
    auto y = is_perfect_square(tr.b() * d + tr.n());
    if (!y) return std::nullopt;
    auto z = is_perfect_square(tr.c * d + tr.n());
    if (!z) return std::nullopt;
    return DnQuadruple{tr, d, *x, *y, *z};
}

struct VerifyResult {
    bool ok = false;
    // root witness for every i<j pair, keyed by (element_i, element_j)
    std::vector<std::array<Int, 3>> roots;  // {ai, aj, root}
    std::optional<std::array<Int, 2>> failing;
};

inline VerifyResult verify_dn_set(const Int& n, std::vector<Int> elements) {
    std::sort(elements.begin(), elements.end());
    VerifyResult res;
    res.ok = true;
    for (size_t i = 0; i < elements.size(); ++i) {
        for (size_t j = i + 1; j < elements.size(); ++j) {
            auto root = is_perfect_square(elements[i] * elements[j] + n);
            if (!root) {
                res.ok = false;
                res.failing = {{elements[i], elements[j]}};
                return res;
            }
            res.roots.push_back({elements[i], elements[j], *root});
        }
    }
    return res;
}

struct DPlusMinus {
    Int d_plus;
    Int d_minus;
};

// d_pm = a+b+c + (abc +- rst)/2; integrality is an invariant of valid triples
inline DPlusMinus d_plus_minus(const DnTriple& tr) {
    Int abc = tr.a() * tr.b() * tr.c;
    Int rst = tr.pair.r * tr.s * tr.t;
    if ((abc + rst) % 2 != 0)
        throw std::logic_error("d_plus_minus: abc and rst have different parity");
    Int base = tr.a() + tr.b() + tr.c;
    return {base + (abc + rst) / 2, base + (abc - rst) / 2};
}

// elements sorted ascending; true iff the largest equals d_plus of the rest
inline bool is_regular(const DnQuadruple& q) {
    return q.d == d_plus_minus(q.triple).d_plus;
}

struct CCandidate {
    int nu;     // 1-based recurrence index
    bool plus;  // branch sign
    Int c;
    std::string label() const { return "c" + std::to_string(nu) + (plus ? "+" : "-"); }
};

// all positive c_nu^{+-} <= cap, merged ascending.  c0 = 0 and
// c1- = a+b-2r can be nonpositive; such values are skipped.
inline std::vector<CCandidate> c_candidates(const DnPair& p, const Int& cap) {
    std::vector<CCandidate> out;
    Int coeff = p.a * p.b + 2;
    Int add = 2 * (p.a + p.b);
    for (int branch = 0; branch < 2; ++branch) {
        bool plus = branch == 1;
        Int prev = 0;
        Int cur = plus ? Int(p.a + p.b + 2 * p.r) : Int(p.a + p.b - 2 * p.r);
        int nu = 1;
        while (true) {
            if (cur > cap) break;
            if (cur > 0) out.push_back({nu, plus, cur});
            Int next = coeff * cur - prev + add;
            prev = cur;
            cur = next;
            ++nu;
            if (prev > cap && cur > cap) break;  // strictly growing past the cap
        }
    }
    std::sort(out.begin(), out.end(), [](const CCandidate& x, const CCandidate& y) {
        return x.c < y.c || (x.c == y.c && x.label() < y.label());
    });
    return out;
}

enum class CLabel { C1m, C1p, C2m, C2p, C3m, C3p, C4m };

inline std::string to_string(CLabel l) {
    switch (l) {
        case CLabel::C1m: return "c1-";
        case CLabel::C1p: return "c1+";
        case CLabel::C2m: return "c2-";
        case CLabel::C2p: return "c2+";
        case CLabel::C3m: return "c3-";
        case CLabel::C3p: return "c3+";
        case CLabel::C4m: return "c4-";
    }
    return "?";
}

inline std::optional<CLabel> clabel_from_string(const std::string& s) {
    for (CLabel l : {CLabel::C1m, CLabel::C1p, CLabel::C2m, CLabel::C2p, CLabel::C3m, CLabel::C3p,
                     CLabel::C4m})
        if (to_string(l) == s) return l;
    return std::nullopt;
}

inline bool clabel_is_c1m(CLabel l) { return l == CLabel::C1m; }

struct CampaignC {
    CLabel label;
    Int c;
};

struct ScopeViolation : std::runtime_error {
    explicit ScopeViolation(const std::string& w) : std::runtime_error(w) {}
};

// The seven candidates c1-..c4- that the campaign must handle, positive
// members only, increasing.  c4+ > b^6 is the reason the list stops
// there; it is asserted.
inline std::vector<CampaignC> campaign_c_list(const DnPair& p) {
    Int coeff = p.a * p.b + 2;
    Int add = 2 * (p.a + p.b);
    auto branch_values = [&](bool plus, int upto) {
        std::vector<Int> vals;
        Int prev = 0;
        Int cur = plus ? Int(p.a + p.b + 2 * p.r) : Int(p.a + p.b - 2 * p.r);
        for (int nu = 1; nu <= upto; ++nu) {
            vals.push_back(cur);
            Int next = coeff * cur - prev + add;
            prev = cur;
            cur = next;
        }
        return vals;
    };
    std::vector<Int> minus = branch_values(false, 4);
    std::vector<Int> plusv = branch_values(true, 4);
    Int b6;
    mpz_pow_ui(b6.get_mpz_t(), p.b.get_mpz_t(), 6);
    if (!(plusv[3] > b6))
        throw ScopeViolation("campaign_c_list: c4+ <= b^6, pair outside the supported scope");

    std::vector<CampaignC> out;
    const CLabel labm[4] = {CLabel::C1m, CLabel::C2m, CLabel::C3m, CLabel::C4m};
    const CLabel labp[3] = {CLabel::C1p, CLabel::C2p, CLabel::C3p};
    for (int i = 0; i < 4; ++i)
        if (minus[i] > 0) out.push_back({labm[i], minus[i]});
    for (int i = 0; i < 3; ++i)
        if (plusv[i] > 0) out.push_back({labp[i], plusv[i]});
    std::sort(out.begin(), out.end(), [](const CampaignC& x, const CampaignC& y) { return x.c < y.c; });
    return out;
}

// ---- brute-force oracles ----

// literal scan: all c in [1, cap] with ac+n and bc+n simultaneously square
inline std::vector<Int> exhaustive_c_scan(const DnPair& p, const Int& cap) {
    std::vector<Int> out;
    // fast path when everything fits into 64 bits
    if (p.n == 4 && p.b * cap + 4 < Int("9000000000000000000")) {
        uint64_t a = p.a.get_ui(), b = p.b.get_ui(), lim = cap.get_ui();
        for (uint64_t c = 1; c <= lim; ++c) {
            if (!is_square_u64(a * c + 4)) continue;
            if (!is_square_u64(b * c + 4)) continue;
            out.push_back(Int(static_cast<unsigned long>(c)));
        }
        return out;
    }
    for (Int c = 1; c <= cap; ++c) {
        if (!is_perfect_square(p.a * c + p.n)) continue;
        if (!is_perfect_square(p.b * c + p.n)) continue;
        out.push_back(c);
    }
    return out;
}

// all positive d <= limit with ad+n, bd+n, cd+n simultaneously square
inline std::vector<Int> brute_force_extensions(const DnTriple& tr, const Int& limit) {
    std::vector<Int> out;
    Int mx = std::max({tr.a(), tr.b(), tr.c});
    if (tr.n() == 4 && mx * limit + 4 < Int("9000000000000000000")) {
        uint64_t a = tr.a().get_ui(), b = tr.b().get_ui(), c = tr.c.get_ui(), lim = limit.get_ui();
        for (uint64_t d = 1; d <= lim; ++d) {
            if (!is_square_u64(a * d + 4)) continue;
            if (!is_square_u64(b * d + 4)) continue;
            if (!is_square_u64(c * d + 4)) continue;
            out.push_back(Int(static_cast<unsigned long>(d)));
        }
        return out;
    }
    for (Int d = 1; d <= limit; ++d) {
        if (!is_perfect_square(tr.a() * d + tr.n())) continue;
        if (!is_perfect_square(tr.b() * d + tr.n())) continue;
        if (!is_perfect_square(tr.c * d + tr.n())) continue;
        out.push_back(d);
    }
    return out;
}

namespace detail {

// smallest-prime-factor sieve
inline std::vector<uint32_t> spf_sieve(uint32_t n) {
    std::vector<uint32_t> spf(n + 1, 0);
    for (uint32_t i = 2; i <= n; ++i) {
        if (spf[i] == 0) {
            for (uint64_t j = i; j <= n; j += i)
                if (spf[j] == 0) spf[j] = i;
        }
    }
    return spf;
}

inline void factor_into(uint64_t v, const std::vector<uint32_t>& spf,
                        std::map<uint64_t, int>& acc) {
    while (v > 1) {
        uint64_t p = spf[v];
        while (v % p == 0) {
            v /= p;
            ++acc[p];
        }
    }
}

inline void all_divisors(const std::map<uint64_t, int>& f, std::vector<uint64_t>& out) {
    out.assign(1, 1);
    for (const auto& [p, e] : f) {
        size_t base = out.size();
        uint64_t pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (size_t j = 0; j < base; ++j) out.push_back(out[j] * pk);
        }
    }
}

} // namespace detail

// Every D(n)-quadruple with max element <= limit, each sorted ascending,
// the list ordered lexicographically.  For n = 4 the pair graph is built
// by factoring r^2-4 = (r-2)(r+2) over a sieve; quadruples are K4s in
// that graph.  Other n fall back to a quadratic pair scan and are only
// meant for desk-scale cross-checks.
inline std::vector<std::array<Int, 4>> brute_force_quadruples(const Int& n, const Int& limit) {
    if (limit < 4) throw std::domain_error("brute_force_quadruples: limit must be >= 4");
    std::vector<std::pair<uint32_t, uint32_t>> edges;

    if (n == 4 && limit <= 100000000) {
        const uint32_t lim = static_cast<uint32_t>(limit.get_ui());
        auto spf = detail::spf_sieve(lim + 2);
        std::map<uint64_t, int> fact;
        std::vector<uint64_t> divs;
        for (uint64_t r = 3; r * r - 4 <= uint64_t(lim) * lim; ++r) {
            uint64_t N = r * r - 4;
            fact.clear();
            detail::factor_into(r - 2, spf, fact);
            detail::factor_into(r + 2, spf, fact);
            detail::all_divisors(fact, divs);
            for (uint64_t d : divs) {
                uint64_t q = N / d;
                if (d < q && q <= lim) edges.emplace_back(uint32_t(d), uint32_t(q));
            }
        }
    } else {
        if (limit > 20000)
            throw std::domain_error("brute_force_quadruples: generic-n path is limited to 2*10^4");
        long lim = limit.get_si();
        for (long a = 1; a <= lim; ++a)
            for (long b = a + 1; b <= lim; ++b)
                if (is_perfect_square(Int(a) * b + n)) edges.emplace_back(a, b);
    }

    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    auto key = [](uint32_t a, uint32_t b) { return (uint64_t(a) << 32) | b; };
    std::unordered_set<uint64_t> edge_set;
    edge_set.reserve(edges.size() * 2);
    for (auto& e : edges) edge_set.insert(key(e.first, e.second));

    // triangles grouped by their lowest edge, then K4 completion
    std::vector<std::array<Int, 4>> quads;
    size_t i = 0;
    while (i < edges.size()) {
        uint32_t a = edges[i].first;
        size_t j = i;
        while (j < edges.size() && edges[j].first == a) ++j;
        // edges[i..j) share the smaller endpoint a; adj(a) = their b's (sorted)
        for (size_t e1 = i; e1 < j; ++e1) {
            uint32_t b = edges[e1].second;
            std::vector<uint32_t> cs;
            for (size_t e2 = e1 + 1; e2 < j; ++e2) {
                uint32_t c = edges[e2].second;
                if (edge_set.count(key(b, c))) cs.push_back(c);
            }
            for (size_t u = 0; u < cs.size(); ++u)
                for (size_t v = u + 1; v < cs.size(); ++v)
                    if (edge_set.count(key(cs[u], cs[v])))
                        quads.push_back({Int(a), Int(b), Int(cs[u]), Int(cs[v])});
        }
        i = j;
    }
    std::sort(quads.begin(), quads.end());
    return quads;
}

} // namespace d4ext
