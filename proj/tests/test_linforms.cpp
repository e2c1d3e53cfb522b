#include <catch2/catch_amalgamated.hpp>

#include "d4ext/linforms.hpp"

using namespace d4ext;

static DnTriple triple_of(const Int& a, const Int& b, const Int& c) {
    auto p = make_dn_pair(4, a, b);
    REQUIRE(p.has_value());
    auto t = make_dn_triple(*p, c);
    REQUIRE(t.has_value());
    return *t;
}

static bool inside(const Enclosure& v, const char* lo, const char* hi) {
    return v.definitely_greater(Rat(lo)) && v.definitely_less(Rat(hi));
}

TEST_CASE("alpha and mu enclosures for (1,5,12)") {
    DnTriple tr = triple_of(1, 5, 12);
    long prec = 96;
    CHECK(inside(alpha1_enclosure(tr, prec), "37320508/10000000", "37320509/10000000"));
    CHECK(inside(alpha2_enclosure(tr, prec), "78729833/10000000", "78729834/10000000"));
    FundPair combo{-2, 2, -2, 2};
    CHECK(inside(mu_enclosure(tr, combo, prec), "44867/10000", "44868/10000"));
}

TEST_CASE("lambda of the (2,2) intersection of (1,5,12)") {
    DnTriple tr = triple_of(1, 5, 12);
    LinearFormInstance inst{tr, CLabel::C1p, {-2, 2, -2, 2}, 2, 2};
    long prec = 128;
    Enclosure lam = lambda_enclosure(inst, prec);
    CHECK(inside(lam, "817/100000", "818/100000"));  // ~0.00852
    CHECK(lam.definitely_positive());
    // containment in (0, alpha1^(2-2m')) of Eq (17): bound ~0.0718
    Enclosure bound = lambda_decay_bound(inst, prec);
    CHECK(inside(bound, "717/10000", "719/10000"));
    CHECK(lam.definitely_less(bound));
}

TEST_CASE("lambda with vanishing indices is log mu") {
    DnTriple tr = triple_of(1, 5, 12);
    FundPair combo{-2, 2, -2, 2};
    LinearFormInstance inst{tr, CLabel::C1p, combo, 0, 0};
    long prec = 128;
    Enclosure lam = lambda_enclosure(inst, prec);
    Enclosure lmu = mu_enclosure(tr, combo, prec).log();
    CHECK((lam - lmu).contains(Rat(0)));
    CHECK(lam.width() <= 2 * lmu.width());
}

TEST_CASE("lemma 3 verifies on an in-scope c1- instance") {
    // family {k^2-4, k^2+2k-3} at k = 101: pair (10197, 10400), c1- = 1
    DnTriple tr = triple_of(10197, 10400, 1);
    auto cases = admissible_cases(tr, CLabel::C1m);
    REQUIRE(cases.size() == 1);
    for (const auto& combo : cases[0].combos) {
        LinearFormInstance inst{tr, CLabel::C1m, combo, 3, 3};
        Lemma3Report rep = lemma3_check(inst);
        CHECK(rep.side_alpha_power);
        if (combo.x0 == combo.y1) {
            // matched-sign combos carry the proof's mu > 0.99; the
            // mixed-sign ones sit below 0.99 at this size and the chain
            // correctly refuses to certify there
            CHECK(rep.holds);
            CHECK(rep.side_mu_gt_099);
        }
    }
    // at a > 10^10 every combo certifies
    DnTriple big = triple_of(Int("10200999996"), Int("10201201997"), Int(1));
    for (const auto& cse : admissible_cases(big, CLabel::C1m))
        for (const auto& combo : cse.combos) {
            LinearFormInstance inst{big, CLabel::C1m, combo, 3, 3};
            Lemma3Report rep = lemma3_check(inst);
            CHECK(rep.holds);
            CHECK(rep.side_mu_gt_099);
            CHECK(rep.side_alpha_power);
        }
    // general-label variant on the same pair
    auto list = campaign_c_list(tr.pair);
    Int c1p;
    for (const auto& cc : list)
        if (cc.label == CLabel::C1p) c1p = cc.c;
    DnTriple tr2 = triple_of(tr.a(), tr.b(), c1p);
    for (const auto& cse : admissible_cases(tr2, CLabel::C1p))
        for (const auto& combo : cse.combos) {
            LinearFormInstance inst{tr2, CLabel::C1p, combo, 5, 3};
            CHECK(lemma3_check(inst).holds);
        }
}

TEST_CASE("lemma 3 preconditions") {
    DnTriple small = triple_of(1, 5, 12);
    LinearFormInstance inst{small, CLabel::C1p, {-2, 2, -2, 2}, 5, 3};
    CHECK_THROWS_AS(lemma3_check(inst), std::domain_error);  // b <= 10^4
    DnTriple big = triple_of(10197, 10400, 1);
    auto cases = admissible_cases(big, CLabel::C1m);
    LinearFormInstance inst2{big, CLabel::C1m, cases[0].combos[0], 2, 2};
    CHECK_THROWS_AS(lemma3_check(inst2), std::domain_error);  // n' < 3
}

TEST_CASE("lemma 4 lower bound") {
    long prec = 128;
    DnTriple tr = triple_of(10197, 10400, 1);
    Enclosure a1 = alpha1_enclosure(tr, prec);
    Enclosure lb = lemma4_lower_bound(2, tr.a(), a1, true);
    CHECK(lb.definitely_positive());
    // grows like sqrt(a)
    DnTriple tr4 = triple_of(Int("10200999996"), Int("10201201997"), Int(1));  // k = 101000
    Enclosure lb4 = lemma4_lower_bound(2, tr4.a(), alpha1_enclosure(tr4, prec), true);
    CHECK(lb.definitely_less(lb4));
    // the c1- variant keeps the extra -0.001 slack
    Enclosure lb_gen = lemma4_lower_bound(2, tr.a(), a1, false);
    CHECK(lb.definitely_less(lb_gen));
    Enclosure diff = lb_gen - lb;
    CHECK(diff.contains(Rat(1, 1000)));
}

TEST_CASE("height of mu: c1- chain dominates the conjugate evaluation") {
    for (auto [a, b, c] : std::vector<std::array<Int, 3>>{
             {Int(10197), Int(10400), Int(1)},
             {Int(19998), Int(20400), Int(2)},
             {Int("10200999996"), Int("10201201997"), Int(1)}}) {
        DnTriple tr = triple_of(a, b, c);
        auto cases = admissible_cases(tr, CLabel::C1m);
        REQUIRE(cases.size() == 1);
        long prec = 192;
        for (const auto& combo : cases[0].combos) {
            Enclosure bound = height_mu_bound(tr, CLabel::C1m, combo, prec);
            // direct evaluation with the paper's leading coefficient
            // a^2 (b-c)^2 and log+ over the four conjugates
            Enclosure lead = Enclosure::from_int(tr.a() * tr.a() * (tr.b() - tr.c) * (tr.b() - tr.c), prec);
            Enclosure acc = lead.log();
            int above_one = 0;
            for (const Enclosure& cj : mu_conjugates_abs(tr, combo, prec)) {
                acc = acc + log_plus(cj, prec);
                if (cj.definitely_greater(Rat(1))) ++above_one;
            }
            Enclosure direct = Enclosure::from_rat(Rat(1, 4), prec) * acc;
            CHECK(above_one <= 2);  // the two stated conjugates above 1
            CHECK(!bound.definitely_less(direct));
        }
    }
}

TEST_CASE("height of mu at a > 10^10 stays under the paper's caps") {
    DnTriple tr = triple_of(Int("10200999996"), Int("10201201997"), Int(1));  // k = 101000
    REQUIRE(tr.a() > Int("10000000000"));
    auto cases = admissible_cases(tr, CLabel::C1m);
    long prec = 192;
    for (const auto& combo : cases[0].combos) {
        Enclosure bound = height_mu_bound(tr, CLabel::C1m, combo, prec);
        Enclosure la2 = alpha2_enclosure(tr, prec).log();
        CHECK(bound.definitely_less(Enclosure::from_rat(Rat(2001, 1000), prec) * la2));
        // 1/4 log(1.001 b^4 c^4)
        Enclosure bc = Enclosure::from_int(tr.b() * tr.c, prec);
        Enclosure cap = Enclosure::from_rat(Rat(1, 4), prec) *
                        (Enclosure::from_rat(Rat(1001, 1000), prec) * (bc * bc * bc * bc)).log();
        CHECK(bound.definitely_less(cap));
    }
    // generic-label bound exists and is positive for c1+ as well
    auto list = campaign_c_list(tr.pair);
    Int c1p;
    for (const auto& cc : list)
        if (cc.label == CLabel::C1p) c1p = cc.c;
    DnTriple tr2 = triple_of(tr.a(), tr.b(), c1p);
    for (const auto& cse : admissible_cases(tr2, CLabel::C1p))
        for (const auto& combo : cse.combos)
            CHECK(height_mu_bound(tr2, CLabel::C1p, combo, prec).definitely_positive());
}

TEST_CASE("degenerate c = b rejected in height bound") {
    DnTriple fake{DnPair{4, Int(1), Int(5), Int(3)}, Int(5), Int(3), Int(0)};
    CHECK_THROWS_AS(height_mu_bound(fake, CLabel::C2m, FundPair{2, 2, 2, 2}, 64),
                    std::domain_error);
}

TEST_CASE("mignotte C0 at the proposition's parameter point") {
    long prec = 256;
    Enclosure kappa = Enclosure::from_long(5, prec).log();
    Enclosure chi = Enclosure::from_long(35, prec) / kappa;
    Enclosure la2 = Enclosure::from_long(100000, prec).log();
    Enclosure a2 = Enclosure::from_rat(Rat(8348, 1000), prec) * la2;
    Enclosure a1 = Enclosure::from_long(8, prec) * Enclosure::from_rat(Rat(4002, 1000), prec) * la2;
    Enclosure c0 = mignotte_c0(kappa, chi, a1, a2);
    CHECK(c0.definitely_less(Rat(2411, 10000)));
    CHECK(c0.definitely_greater(Rat(2409, 10000)));
    // kappa, chi, v definitional identities recomputed
    Enclosure v = 4 * chi + Enclosure::from_long(4, prec) + Enclosure::from_long(1, prec) / chi;
    Enclosure v_direct = 4 * Enclosure::from_long(35, prec) / kappa + Enclosure::from_long(4, prec) +
                         kappa / Enclosure::from_long(35, prec);
    CHECK((v - v_direct).contains(Rat(0)));
}

TEST_CASE("mignotte parameter constraints raise domain errors") {
    long prec = 128;
    auto E = [&](long x) { return Enclosure::from_long(x, prec); };
    MignotteParameters p{4, Int(1), Int(3), E(5), E(5).log(), E(2), E(2), E(40)};
    CHECK_THROWS_AS(mignotte_lower_bound(p), std::domain_error);  // a1 a2 = 4 < 20
    MignotteParameters p2{4, Int(1), Int(3), E(3), E(3).log(), E(100), E(100), E(40)};
    CHECK_THROWS_AS(mignotte_lower_bound(p2), std::domain_error);  // rho < 4
    MignotteParameters p3{4, Int(1), Int(3), E(5), E(5).log(), E(100), E(100), E(1)};
    CHECK_THROWS_AS(mignotte_lower_bound(p3), std::domain_error);  // h < 3.5
    // a valid parameter set yields a finite negative bound
    MignotteParameters ok{4, Int(1), Int(3), E(5), E(5).log(), E(100), E(100), E(40)};
    Enclosure lb = mignotte_lower_bound(ok);
    CHECK(lb.definitely_negative());
}

TEST_CASE("mignotte bound monotone nonincreasing in a1, a2, h (sampled)") {
    long prec = 128;
    auto E = [&](long x) { return Enclosure::from_long(x, prec); };
    auto bound_at = [&](long a1, long a2, long h) {
        MignotteParameters p{4, Int(1), Int(3), E(5), E(5).log(), E(a1), E(a2), E(h)};
        return mignotte_lower_bound(p);
    };
    Enclosure base = bound_at(100, 100, 40);
    CHECK(!base.definitely_less(bound_at(200, 100, 40)));
    CHECK(!base.definitely_less(bound_at(100, 200, 40)));
    CHECK(!base.definitely_less(bound_at(100, 100, 80)));
}

TEST_CASE("proposition 1 pipeline reproduces the paper constants") {
    Prop1Result res = proposition1_pipeline();
    CHECK(res.ok);
    CHECK(res.c0 < 0.2411);
    CHECK(res.threshold <= 14170.0);
    CHECK(res.threshold > 14000.0);
    CHECK(res.branch_floor <= 11231);
    CHECK(res.a_bound <= Int("655000000000"));
    CHECK(res.a_bound > Int("600000000000"));
    // the two auxiliary paper claims that cannot be certified as printed
    // are reported, not silently dropped
    int notes = 0;
    for (const auto& chk : res.checks)
        if (!chk.ok && !chk.gating) ++notes;
    CHECK(notes == 2);
}
