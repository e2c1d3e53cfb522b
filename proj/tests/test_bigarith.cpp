#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "d4ext/bigarith/contfrac.hpp"
#include "d4ext/bigarith/expr.hpp"

using namespace d4ext;

TEST_CASE("isqrt basics") {
    CHECK(isqrt(Int(0)) == 0);
    CHECK(isqrt(Int(99)) == 9);
    Int big = Int(10);
    mpz_pow_ui(big.get_mpz_t(), big.get_mpz_t(), 40);
    big += 1;
    Int r = isqrt(big);
    Int e20 = Int(10);
    mpz_pow_ui(e20.get_mpz_t(), e20.get_mpz_t(), 20);
    CHECK(r == e20);
    CHECK(r * r <= big);
    CHECK((r + 1) * (r + 1) > big);
    CHECK_THROWS_AS(isqrt(Int(-1)), std::domain_error);
}

TEST_CASE("isqrt against the incremental-square oracle up to 10^6") {
    // oracle: track r with r^2 <= n via running squares, no sqrt anywhere
    unsigned long r = 0;
    unsigned long next_sq = 1;  // (r+1)^2
    for (unsigned long n = 0; n <= 1000000; ++n) {
        if (n == next_sq) {
            ++r;
            next_sq = (r + 1) * (r + 1);
        }
        if (n % 997 == 0 || n + 5 >= next_sq) {  // dense near square boundaries
            REQUIRE(isqrt(Int(n)) == r);
        }
    }
}

TEST_CASE("is_perfect_square") {
    auto r = is_perfect_square(Int(1156));
    REQUIRE(r.has_value());
    CHECK(*r == 34);
    CHECK(Int(12 * 96 + 4) == 1156);
    CHECK_FALSE(is_perfect_square(Int(2)).has_value());
    CHECK_FALSE(is_perfect_square(Int(-4)).has_value());
}

TEST_CASE("is_square_u64 matches mpz on randoms") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20000; ++i) {
        uint64_t n = rng() >> 12;
        bool fast = is_square_u64(n);
        bool slow = is_perfect_square(Int(static_cast<unsigned long>(n))).has_value();
        REQUIRE(fast == slow);
    }
    uint64_t root = 0;
    REQUIRE(is_square_u64(uint64_t(3037000498ULL) * 3037000498ULL, &root));
    CHECK(root == 3037000498ULL);
}

TEST_CASE("mod_sqrt_all examples") {
    CHECK(mod_sqrt_all(4L, 1L) == std::vector<long>{0});
    CHECK(mod_sqrt_all(4L, 12L) == std::vector<long>({2, 4, 8, 10}));
    CHECK(mod_sqrt_all(4L, 812L).size() == 8);  // 2*2*2 classes from 812 = 4*7*29
}

TEST_CASE("mod_sqrt_all equals brute scan for m <= 2000 (sampled)") {
    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 60; ++iter) {
        long m = 1 + static_cast<long>(rng() % 2000);
        long n = static_cast<long>(rng() % 50);
        auto got = mod_sqrt_all(n, m);
        std::vector<long> want;
        for (long t = 0; t < m; ++t)
            if (((t * t - n) % m + m) % m == 0) want.push_back(t);
        REQUIRE(got == want);
    }
}

TEST_CASE("enclosure arithmetic is outward and ordered") {
    long prec = 64;
    Enclosure a = Enclosure::from_rat(Rat(1, 3), prec);
    Enclosure b = Enclosure::from_rat(Rat(2, 7), prec);
    Enclosure s = a + b;
    CHECK(s.contains(Rat(Rat(1, 3) + Rat(2, 7))));
    Enclosure m = a * b;
    CHECK(m.contains(Rat(2, 21)));
    Enclosure d = a / b;
    CHECK(d.contains(Rat(7, 6)));
    CHECK(d.lo_rat() <= d.hi_rat());
}

TEST_CASE("enclose: sqrt(2) at 10 bits") {
    Expr e = Expr::integer(2).sqrt();
    Enclosure v = enclose(e, 10);
    CHECK(v.contains(Rat("141421356237/100000000000")));
    CHECK(v.width() < Rat(2, 512));  // 2^(1-10) * max(1,|v|) with v < 2
}

TEST_CASE("enclose: log 1 straddles 0") {
    Enclosure v = enclose(Expr::integer(1).log(), 20);
    CHECK(v.lo_rat() <= 0);
    CHECK(v.hi_rat() >= 0);
}

TEST_CASE("enclose: alpha1 of (1,5,12)") {
    // s = 4 since s^2 = ac+4 = 16; alpha1 = (4 + sqrt(12))/2
    Expr e = (Expr::integer(4) + Expr::integer(12).sqrt()) / Expr::integer(2);
    Enclosure v = enclose(e, 40);
    CHECK(v.definitely_greater(Rat("37320508/10000000")));
    CHECK(v.definitely_less(Rat("37320509/10000000")));
    CHECK_THROWS_AS(enclose(Expr::integer(-3).sqrt(), 10), std::domain_error);
    CHECK_THROWS_AS(enclose(Expr::integer(0).log(), 10), std::domain_error);
}

TEST_CASE("enclosure soundness: tighter precision nests inside looser") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 1000; ++i) {
        long num = 1 + static_cast<long>(rng() % 100000);
        long den = 1 + static_cast<long>(rng() % 1000);
        Expr e = (Expr::integer(num) / Expr::integer(den)).sqrt().log() +
                 Expr::integer(den).sqrt();
        Enclosure loose = e.eval(64);
        Enclosure tight = e.eval(128);
        REQUIRE(tight.contained_in(loose));
        REQUIRE(tight.width() <= loose.width());
    }
}

TEST_CASE("nearest integer distance") {
    long prec = 64;
    auto enc = [&](const Rat& lo, const Rat& hi) {
        return Enclosure::from_endpoints(lo, hi, prec);
    };
    Enclosure half = nearest_integer_distance(enc(Rat(5, 2), Rat(5, 2)));
    CHECK(half.contains(Rat(1, 2)));
    Enclosure tiny = nearest_integer_distance(enc(Rat(7001, 1000), Rat(7001, 1000)));
    CHECK(tiny.contains(Rat(1, 1000)));
    Enclosure neg = nearest_integer_distance(enc(Rat(-1, 4), Rat(-1, 4)));
    CHECK(neg.contains(Rat(1, 4)));
    // interval covering an integer and a half-integer
    Enclosure wide = nearest_integer_distance(enc(Rat(9, 10), Rat(16, 10)));
    CHECK(wide.lo_rat() == 0);
    CHECK(wide.hi_rat() == Rat(1, 2));
}

TEST_CASE("continued fraction of a rational terminates with Euclid") {
    auto st = expand_continued_fraction(Rat(225, 157),
                                        [](const ContinuedFractionState&) { return false; });
    CHECK(st.exact_termination);
    // 225/157 = [1; 2, 3, 4, 5, 2]
    Rat acc(st.partial_quotients.back());
    for (size_t i = st.partial_quotients.size() - 1; i-- > 0;)
        acc = Rat(st.partial_quotients[i]) + Rat(1) / acc;
    CHECK(acc == Rat(225, 157));
    CHECK(st.convergents.back().p == 225);
    CHECK(st.convergents.back().q == 157);
}

TEST_CASE("convergent_exceeding on 1/3 and the golden ratio") {
    auto c = convergent_exceeding(Rat(1, 3), Int(2));
    REQUIRE(c.has_value());
    CHECK(c->p == 1);
    CHECK(c->q == 3);

    Expr phi = (Expr::integer(1) + Expr::integer(5).sqrt()) / Expr::integer(2);
    Enclosure phi_e = phi.eval(128);
    auto g = convergent_exceeding(phi_e, Int(10));
    REQUIRE(g.has_value());
    CHECK(g->p == 21);  // Fibonacci convergent 21/13
    CHECK(g->q == 13);

    // interval of width ~0.1 cannot certify convergents out to q_min = 1000
    Enclosure wide = Enclosure::from_endpoints(Rat(3, 10), Rat(4, 10), 64);
    CHECK_FALSE(convergent_exceeding(wide, Int(1000)).has_value());
}

TEST_CASE("convergents of an irrational satisfy |theta - p/q| < 1/q^2") {
    Expr e = Expr::integer(7).sqrt();
    Enclosure th = e.eval(256);
    auto st = expand_continued_fraction(
        th, [](const ContinuedFractionState& s) { return s.convergents.size() >= 12; });
    REQUIRE(st.convergents.size() >= 12);
    for (const auto& cv : st.convergents) {
        Rat pq = Rat(cv.p) / Rat(cv.q);
        Rat dev = std::max(Rat(abs(th.lo_rat() - pq)), Rat(abs(th.hi_rat() - pq)));
        REQUIRE(dev < Rat(1) / Rat(cv.q * cv.q));
    }
}

TEST_CASE("precision escalation decides thin comparisons and caps out") {
    // sqrt(2)*sqrt(2) vs 2: the interval always contains 2, so a strict
    // separation never certifies; the cap must fire
    Expr prod = Expr::integer(2).sqrt() * Expr::integer(2).sqrt();
    CHECK_THROWS_AS(with_escalation(
                        32,
                        [&](long prec) {
                            Enclosure v = prod.eval(prec);
                            if (v.contains(Rat(2))) throw Undecided("still contains 2");
                            return v;
                        },
                        1 << 12),
                    PrecisionExhausted);
}
