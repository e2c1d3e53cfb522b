#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "d4ext/dtuples.hpp"

using namespace d4ext;

static DnPair pair_of(long a, long b) {
    auto p = make_dn_pair(4, Int(a), Int(b));
    REQUIRE(p.has_value());
    return *p;
}

static DnTriple triple_of(long a, long b, long c) {
    auto t = make_dn_triple(pair_of(a, b), Int(c));
    REQUIRE(t.has_value());
    return *t;
}

TEST_CASE("verify_dn_set") {
    CHECK(verify_dn_set(4, {Int(1), Int(5), Int(12), Int(96)}).ok);
    auto bad = verify_dn_set(4, {Int(1), Int(5), Int(13)});
    CHECK_FALSE(bad.ok);
    REQUIRE(bad.failing.has_value());
    CHECK((*bad.failing)[0] == 1);
    CHECK((*bad.failing)[1] == 13);  // 1*13+4 = 17 is not a square
    CHECK(verify_dn_set(4, {Int(7)}).ok);  // no pairs to check
    // the classical D(1) quadruple as a cross-check of generic n
    CHECK(verify_dn_set(1, {Int(1), Int(3), Int(8), Int(120)}).ok);
}

TEST_CASE("d_plus_minus on (1,5,12)") {
    DnTriple tr = triple_of(1, 5, 12);
    CHECK(tr.s == 4);
    CHECK(tr.t == 8);
    DPlusMinus d = d_plus_minus(tr);
    CHECK(d.d_plus == 96);   // 18 + (60 + 96)/2
    CHECK(d.d_minus == 0);   // 18 + (60 - 96)/2
    CHECK(d.d_plus - d.d_minus == tr.pair.r * tr.s * tr.t);
}

TEST_CASE("d_plus self-check: {a,b,c,d+} verifies") {
    for (auto [a, b, c] : std::vector<std::array<long, 3>>{
             {1, 5, 12}, {1, 5, 96}, {1, 12, 96}, {5, 12, 96}, {3, 7, 20}}) {
        DnTriple tr = triple_of(a, b, c);
        DPlusMinus d = d_plus_minus(tr);
        CHECK(verify_dn_set(4, {Int(a), Int(b), Int(c), d.d_plus}).ok);
        if (d.d_minus > 0) CHECK(verify_dn_set(4, {Int(a), Int(b), d.d_minus, Int(c)}).ok);
    }
}

TEST_CASE("d integrality on random triples from c candidates") {
    std::mt19937_64 rng(5);
    int seen = 0;
    while (seen < 10000) {
        long a = 1 + static_cast<long>(rng() % 300);
        long b = a + 1 + static_cast<long>(rng() % 300);
        auto p = make_dn_pair(4, Int(a), Int(b));
        if (!p) continue;
        for (const auto& cc : c_candidates(*p, Int(1000000))) {
            auto tr = make_dn_triple(*p, cc.c);
            REQUIRE(tr.has_value());
            CHECK_NOTHROW(d_plus_minus(*tr));  // abc and rst share parity
            ++seen;
        }
    }
}

TEST_CASE("c_candidates for (1,5)") {
    DnPair p = pair_of(1, 5);
    auto cs = c_candidates(p, Int(1000000));
    REQUIRE_FALSE(cs.empty());
    CHECK(cs.front().c == 12);  // c1+ = 1+5+2*3
    // c1- = 1+5-6 = 0 is excluded
    for (const auto& cc : cs) CHECK(cc.c > 0);
    // second distinct value is 96
    Int second = 0;
    for (const auto& cc : cs)
        if (cc.c != 12) {
            second = cc.c;
            break;
        }
    CHECK(second == 96);
    // every candidate yields a valid triple
    for (const auto& cc : cs) {
        CHECK(is_perfect_square(p.a * cc.c + 4).has_value());
        CHECK(is_perfect_square(p.b * cc.c + 4).has_value());
    }
}

TEST_CASE("c_candidates equals the exhaustive scan (oracle)") {
    for (auto [a, b] : std::vector<std::array<long, 2>>{
             {1, 5}, {1, 12}, {1, 21}, {3, 7}, {5, 12}, {3, 4}, {2, 6}, {21, 32}, {16, 30},
             {19998, 20400}, {10197, 10400}}) {
        DnPair p = pair_of(a, b);
        Int cap = 2000000;
        auto cands = c_candidates(p, cap);
        std::vector<Int> vals;
        for (const auto& cc : cands) vals.push_back(cc.c);
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        CHECK(vals == exhaustive_c_scan(p, cap));
    }
}

TEST_CASE("completeness of the recurrences needs the pair gap condition") {
    // (12,96) has b = 8a, far outside b < 2a: extra solution classes of
    // the Pellian system contribute third elements the c recurrences do
    // not reach ({12,96,1} and {12,96,5} are triples).  In-scope pairs
    // (b > 10^4, within the gap) force b < 2a where the recurrences are
    // exhaustive.
    DnPair p = pair_of(12, 96);
    auto scan = exhaustive_c_scan(p, Int(200));
    CHECK(std::find(scan.begin(), scan.end(), Int(1)) != scan.end());
    CHECK(std::find(scan.begin(), scan.end(), Int(5)) != scan.end());
    auto cands = c_candidates(p, Int(200));
    for (const auto& cc : cands) CHECK((cc.c != 1 && cc.c != 5));
}

TEST_CASE("campaign_c_list on an in-scope pair") {
    // family {2k^2-2, 2k^2+4k} at k = 100
    DnPair p = pair_of(19998, 20400);
    REQUIRE(pair_in_scope(p));
    auto list = campaign_c_list(p);
    REQUIRE(list.size() == 7);
    CHECK(list[0].label == CLabel::C1m);
    CHECK(list[0].c == 2);  // c1- equals the family index m
    for (size_t i = 1; i < list.size(); ++i) CHECK(list[i - 1].c < list[i].c);
    // c4+ > b^6 holds (asserted inside).  c4- of this pair also exceeds
    // b^6, so the seven labels are a conservative superset of {c < b^6}.
    Int b6;
    mpz_pow_ui(b6.get_mpz_t(), p.b.get_mpz_t(), 6);
    CHECK(list.back().c > b6);
}

TEST_CASE("is_regular") {
    DnTriple tr = triple_of(1, 5, 12);
    auto quad = make_dn_quadruple(tr, Int(96));
    REQUIRE(quad.has_value());
    CHECK(is_regular(*quad));
    // same triple with a forged largest element
    DnQuadruple forged{tr, Int(100), Int(0), Int(0), Int(0)};
    CHECK_FALSE(is_regular(forged));
}

TEST_CASE("brute_force_extensions") {
    CHECK(brute_force_extensions(triple_of(1, 5, 12), Int(1000000)) == std::vector<Int>{96});
    // {1,5,96}: d- = 12 and d+ = 672 both lie below 10^4
    CHECK(brute_force_extensions(triple_of(1, 5, 96), Int(10000)) ==
          std::vector<Int>({12, 672}));
    // d_plus always among extensions when below the limit
    for (auto [a, b, c] : std::vector<std::array<long, 3>>{{1, 5, 12}, {3, 7, 20}, {1, 12, 5}}) {
        DnTriple tr = triple_of(a, b, c);
        Int dp = d_plus_minus(tr).d_plus;
        auto ds = brute_force_extensions(tr, dp + 10);
        CHECK(std::find(ds.begin(), ds.end(), dp) != ds.end());
    }
}

TEST_CASE("brute_force_quadruples small") {
    auto qs = brute_force_quadruples(4, Int(100));
    std::array<Int, 4> known{Int(1), Int(5), Int(12), Int(96)};
    CHECK(std::find(qs.begin(), qs.end(), known) != qs.end());
    for (const auto& q : qs) {
        CHECK(verify_dn_set(4, {q[0], q[1], q[2], q[3]}).ok);
        auto tr = make_dn_triple(*make_dn_pair(4, q[0], q[1]), q[2]);
        REQUIRE(tr.has_value());
        CHECK(q[3] == d_plus_minus(*tr).d_plus);
    }
    CHECK(brute_force_quadruples(4, Int(10)).empty());
}

TEST_CASE("brute_force_quadruples generic n") {
    auto qs = brute_force_quadruples(1, Int(130));
    std::array<Int, 4> known{Int(1), Int(3), Int(8), Int(120)};
    CHECK(std::find(qs.begin(), qs.end(), known) != qs.end());
    for (const auto& q : qs) CHECK(verify_dn_set(1, {q[0], q[1], q[2], q[3]}).ok);
}

TEST_CASE("n=4 sieve path agrees with the naive path") {
    auto fast = brute_force_quadruples(4, Int(2000));
    // force the generic path by asking through a distinct n... the naive
    // comparison instead: rebuild the edge relation directly
    std::vector<std::array<Int, 4>> naive;
    for (long a = 1; a <= 2000; ++a)
        for (long b = a + 1; b <= 2000; ++b) {
            if (!is_square_u64(uint64_t(a) * b + 4)) continue;
            for (long c = b + 1; c <= 2000; ++c) {
                if (!is_square_u64(uint64_t(a) * c + 4) || !is_square_u64(uint64_t(b) * c + 4))
                    continue;
                for (long d = c + 1; d <= 2000; ++d)
                    if (is_square_u64(uint64_t(a) * d + 4) && is_square_u64(uint64_t(b) * d + 4) &&
                        is_square_u64(uint64_t(c) * d + 4))
                        naive.push_back({Int(a), Int(b), Int(c), Int(d)});
            }
        }
    CHECK(fast == naive);
}

TEST_CASE("extension symmetry: any permutation of a quadruple verifies") {
    std::vector<Int> elems{Int(5), Int(96), Int(1), Int(12)};
    CHECK(verify_dn_set(4, elems).ok);  // verify sorts internally
    std::vector<Int> elems2{Int(96), Int(12), Int(5), Int(1)};
    CHECK(verify_dn_set(4, elems2).ok);
}
