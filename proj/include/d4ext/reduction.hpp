#pragma once

#include <functional>
#include <string>
#include <vector>

#include "d4ext/bigarith/contfrac.hpp"
#include "d4ext/linforms.hpp"

namespace d4ext {

// canonical reduction shape: 0 < k*theta - j + beta < A * B^(-k) for the
// decay index k (m' in general, n' when c = c1-), with theta in (0,1)
struct ReductionShape {
    std::function<Enclosure(long)> theta;
    std::function<Enclosure(long)> beta;
    std::function<Enclosure(long)> A;
    std::function<Enclosure(long)> B;
    bool decay_in_n = false;  // true for the c1- normalization by log(alpha1)
};

struct ReductionInstance {
    ReductionShape shape;
    Int M;  // certified bound on the decay index
};

// Eq (17): divide by log(alpha2):  theta = log a1/log a2, beta = log mu/log a2,
//          A = a1^2/log a2, B = a1^2, decay variable m'.
// Eq (18): divide by log(alpha1):  x = nu' - n'(log a2/log a1 - 1) + log mu/log a1,
//          theta = log a2/log a1 - 1 (in (0,1)), A = a2/log a1, B = a2^2,
//          decay variable n'.
enum class BoundKind { lf1, lf2 };

inline ReductionShape to_reduction_shape(const DnTriple& tr, const FundPair& combo, BoundKind kind) {
    ReductionShape sh;
    if (kind == BoundKind::lf1) {
        sh.decay_in_n = false;
        sh.theta = [tr](long prec) {
            return alpha1_enclosure(tr, prec).log() / alpha2_enclosure(tr, prec).log();
        };
        sh.beta = [tr, combo](long prec) {
            Enclosure mu = mu_enclosure(tr, combo, prec);
            if (!mu.definitely_positive()) throw Undecided("reduction shape: mu sign");
            return mu.log() / alpha2_enclosure(tr, prec).log();
        };
        sh.A = [tr](long prec) {
            Enclosure a1 = alpha1_enclosure(tr, prec);
            return a1 * a1 / alpha2_enclosure(tr, prec).log();
        };
        sh.B = [tr](long prec) {
            Enclosure a1 = alpha1_enclosure(tr, prec);
            return a1 * a1;
        };
    } else {
        sh.decay_in_n = true;
        sh.theta = [tr](long prec) {
            return alpha2_enclosure(tr, prec).log() / alpha1_enclosure(tr, prec).log() -
                   Enclosure::from_long(1, prec);
        };
        sh.beta = [tr, combo](long prec) {
            Enclosure mu = mu_enclosure(tr, combo, prec);
            if (!mu.definitely_positive()) throw Undecided("reduction shape: mu sign");
            return mu.log() / alpha1_enclosure(tr, prec).log();
        };
        sh.A = [tr](long prec) {
            return alpha2_enclosure(tr, prec) / alpha1_enclosure(tr, prec).log();
        };
        sh.B = [tr](long prec) {
            Enclosure a2 = alpha2_enclosure(tr, prec);
            return a2 * a2;
        };
    }
    return sh;
}

struct ReductionOutcome {
    bool success = false;
    Int p, q;          // the convergent used
    Rat eps_lo;        // certified lower bound of epsilon = |q beta| - M |q theta|
    Int new_bound;     // decay index < log(A q / eps)/log B
    std::string failure_reason;
    long used_prec = 0;
};

// independent exact-rational recheck of the certificate:
// eps = dist(q*beta, Z) - M * dist(q*theta, Z) > 0 from the enclosure endpoints
inline bool verify_epsilon_exact(const Enclosure& theta, const Enclosure& beta, const Int& q,
                                 const Int& M) {
    auto dist_interval = [&](const Rat& lo, const Rat& hi, bool want_min) -> Rat {
        // distance of [lo,hi] points to nearest integer, exact endpoints
        Rat eps_lo, eps_hi;
        auto d = [](const Rat& v) {
            Rat fr = v - Rat(rat_floor(v));
            Rat alt = Rat(1) - fr;
            return std::min(fr, alt);
        };
        if (hi - lo >= 1) return want_min ? Rat(0) : Rat(1, 2);
        bool has_int = rat_floor(hi) >= rat_floor(lo) + 1 || lo == Rat(rat_floor(lo));
        Rat two_lo = 2 * lo, two_hi = 2 * hi;
        bool has_half = false;
        Int k = rat_floor(two_lo);
        for (int i = 0; i < 4; ++i, k += 1)
            if (Rat(k) >= two_lo && Rat(k) <= two_hi && k % 2 != 0) has_half = true;
        if (want_min) return has_int ? Rat(0) : std::min(d(lo), d(hi));
        return has_half ? Rat(1, 2) : std::max(d(lo), d(hi));
    };
    Rat qb_lo = Rat(q) * beta.lo_rat(), qb_hi = Rat(q) * beta.hi_rat();
    Rat qt_lo = Rat(q) * theta.lo_rat(), qt_hi = Rat(q) * theta.hi_rat();
    Rat min_qb = dist_interval(qb_lo, qb_hi, true);
    Rat max_qt = dist_interval(qt_lo, qt_hi, false);
    return min_qb - Rat(M) * max_qt > 0;
}

// One Dujella-Petho reduction step: convergent p/q of theta with q > 6M
// and eps = |q beta| - M |q theta| > 0 certified give
// decay index < log(A q / eps) / log B.  Advances through up to five
// convergents when eps fails to certify positive.
inline ReductionOutcome baker_davenport_step(const ReductionInstance& inst) {
    // working precision: ~ 2 log10(6M) + 15 digits to start
    double digits = 2.0 * (mpz_sizeinbase(Int(6 * inst.M).get_mpz_t(), 10)) + 15;
    long start_bits = static_cast<long>(digits * 3.33) + 32;

    return with_escalation(start_bits, [&](long prec) -> ReductionOutcome {
        ReductionOutcome out;
        out.used_prec = prec;
        Enclosure th = inst.shape.theta(prec);
        Enclosure be = inst.shape.beta(prec);
        if (!(th.definitely_positive() && th.definitely_less(Rat(1))))
            throw Undecided("reduction: theta not certified inside (0,1)");
        Int six_m = 6 * inst.M;

        // expand until eight convergents lie beyond 6M (five get tried)
        int beyond = 0;
        ContinuedFractionState st = expand_continued_fraction(
            th,
            [&](const ContinuedFractionState& s) {
                if (s.convergents.back().q > six_m) ++beyond;
                return beyond >= 8;
            },
            4 * mpz_sizeinbase(six_m.get_mpz_t(), 2) + 64);
        std::vector<Convergent> cands;
        for (const auto& cv : st.convergents)
            if (cv.q > six_m) cands.push_back(cv);
        if (cands.empty()) {
            if (st.insufficient_precision) throw Undecided("reduction: CF expansion starved");
            out.failure_reason = "theta rational with bounded denominator; no convergent beyond 6M";
            return out;
        }

        int tried = 0;
        for (const auto& cv : cands) {
            if (tried >= 5) break;
            // certify |theta - p/q| < 1/q^2 on exact endpoints
            Rat pq = Rat(cv.p) / Rat(cv.q);
            Rat dev = std::max(abs(th.lo_rat() - pq), abs(th.hi_rat() - pq));
            if (!(dev < Rat(1) / Rat(cv.q * cv.q)))
                throw Undecided("reduction: convergent quality not certifiable at this width");
            ++tried;
            Enclosure q_e = Enclosure::from_int(cv.q, prec);
            Enclosure qb = nearest_integer_distance(q_e * be);
            Enclosure qt = nearest_integer_distance(q_e * th);
            Enclosure eps = qb - Enclosure::from_int(inst.M, prec) * qt;
            if (eps.definitely_positive()) {
                Enclosure A = inst.shape.A(prec);
                Enclosure B = inst.shape.B(prec);
                Enclosure bound = ((A * q_e) / eps).log() / B.log();
                out.success = true;
                out.p = cv.p;
                out.q = cv.q;
                out.eps_lo = eps.lo_rat();
                out.new_bound = bound.floor_hi();
                if (out.new_bound < 0) out.new_bound = 0;
                return out;
            }
            if (eps.sign_hi() > 0) throw Undecided("reduction: epsilon sign undecided");
            // certified nonpositive: try the next convergent
        }
        out.failure_reason = "epsilon nonpositive for " + std::to_string(tried) + " convergents";
        return out;
    });
}

// ---- per-instance index bound from the Mignotte inequality ----

struct IndexBoundResult {
    Int M;                 // bound on the decay index of the reduction shape
    bool fallback = false; // certification failed; conservative cap used
    Int x_star;            // certified bound on n'/((nu'+2.002) log alpha2)
    Int nu_cap;            // certified bound on nu' (0 when fallback)
    std::string note;
};

inline const Int& fallback_index_bound() {
    static const Int M("10000000000000000000000000");  // 10^25
    return M;
}

// Certified M with decay index <= M for any solution, from the Mignotte
// lower bound against the decay inequality, Lemma 4's gap bound on nu',
// and Lemma 3's index conversion.  The gap route closes only when
// (2/57) sqrt(a) log(alpha1) exceeds the instance's X threshold, which
// needs a of order 10^11; smaller instances take the documented
// conservative cap.
inline IndexBoundResult derive_index_bound(const LinearFormInstance& inst, long prec = 256) {
    IndexBoundResult res;
    try {
        return with_escalation(prec, [&](long p) -> IndexBoundResult {
            IndexBoundResult r;
            auto E = [&](long v) { return Enclosure::from_long(v, p); };
            auto ER = [&](const Rat& v) { return Enclosure::from_rat(v, p); };
            const DnTriple& tr = inst.triple;

            Enclosure la1 = alpha1_enclosure(tr, p).log();
            Enclosure la2 = alpha2_enclosure(tr, p).log();
            Enclosure mu = mu_enclosure(tr, inst.combo, p);
            if (!mu.definitely_positive()) throw Undecided("index bound: mu sign");
            Enclosure lmu_abs = mu.log().abs();
            Enclosure hmu = height_mu_bound(tr, inst.label, inst.combo, p);

            // The nu' cap below leans on Lemma 4, which needs the Lemma 3
            // chain (decay tail below 0.001 log(alpha) + log(mu)) to hold
            // for this combo; certify it or fall back.
            {
                bool c1m_kind = inst.label == CLabel::C1m;
                Enclosure alph = c1m_kind ? alpha2_enclosure(tr, p) : alpha1_enclosure(tr, p);
                Enclosure decay = Enclosure::from_long(1, p) /
                                  alph.pow_ui(c1m_kind ? 5 : 6);
                Enclosure slack3 = ER(Rat(1, 1000)) * alph.log() + mu.log();
                if (!decay.definitely_less(slack3)) {
                    IndexBoundResult fb;
                    fb.fallback = true;
                    fb.M = fallback_index_bound();
                    fb.nu_cap = 0;
                    fb.note = "lemma-3 chain not certifiable for this combo";
                    return fb;
                }
            }

            Enclosure kappa = E(5).log();  // rho = 5 as in the paper
            // a2 >= 4 log(alpha2/alpha1) + 8 h(gamma2), h(gamma2) <= (log a1 + log a2)/2
            Enclosure a2 = 4 * (la2 - la1) + 4 * (la1 + la2);
            a2 = Enclosure::from_rat(std::max(a2.hi_rat(), Rat(1)), p);
            // a1(nu') = slope nu' + c0req
            Enclosure slope = Enclosure::from_rat((E(8) * la1).hi_rat(), p);
            Enclosure c0req = Enclosure::from_rat((4 * lmu_abs + E(8) * hmu).hi_rat(), p);
            // a1(nu')/(nu'+2.002) inside [lo_ratio, hi_ratio] for nu' >= 2
            Enclosure r2002 = ER(Rat(2002, 1000));
            Enclosure at2 = (2 * slope + c0req) / ER(Rat(4002, 1000));
            Enclosure hi_ratio = Enclosure::from_rat(std::max(at2.hi_rat(), slope.hi_rat()), p);
            Enclosure lo_ratio = Enclosure::from_rat(std::min(at2.lo_rat(), slope.lo_rat()), p);
            if (!lo_ratio.definitely_positive()) throw Undecided("index bound: a1 ratio");

            bool c1m = inst.label == CLabel::C1m;
            // X <= mult (kappa+h(X))^2 + slack
            Enclosure denom = c1m ? (E(2) * la2 * la2) : (E(2) * la1 * la2);
            Enclosure mult = hi_ratio * a2 / denom;  // times (C0+0.06)(kappa+h)^2 later
            Enclosure slack = c1m ? (E(1) / (E(2) * ER(Rat(4002, 1000)) * la2)) : E(0);

            Enclosure a1_floor = 2 * slope + c0req;  // a1 at nu' = 2 (C0 worst case)
            auto h_of = [&](const Int& X) {
                Enclosure ratio = E(1) / a2 + Enclosure::from_int(X, p) * la2 / lo_ratio;
                Enclosure hreq = E(4) * (ratio.log() + ER(Rat(1377, 1000))) + kappa.log() +
                                 ER(Rat(23, 1000));
                Rat hv = std::max({hreq.hi_rat(), (ER(Rat(3, 2)) * kappa).hi_rat(), Rat(7, 2)});
                return Enclosure::from_rat(hv, p);
            };
            auto rhs_at = [&](const Int& X) {
                Enclosure h = h_of(X);
                Enclosure chi = h / kappa;
                Enclosure c0 = mignotte_c0(kappa, chi, a1_floor, a2);
                Enclosure kh = kappa + h;
                return (c0 + ER(Rat(6, 100))) * kh * kh * mult + slack;
            };

            // find certified X* by doubling then bisection
            Int X = 1024;
            int guard = 0;
            while (!Enclosure::from_int(X, p).definitely_greater(rhs_at(X).hi_rat())) {
                X *= 2;
                if (++guard > 80) throw Undecided("index bound: X search diverged");
            }
            Int lo = X / 2 > 2 ? X / 2 : Int(2), hi = X;
            while (lo + 1 < hi) {
                Int mid = (lo + hi) / 2;
                if (Enclosure::from_int(mid, p).definitely_greater(rhs_at(mid).hi_rat())) hi = mid;
                else lo = mid;
            }
            // no-further-crossing guard: d/dX rhs <= 8 mult' (kappa+h)/X < 1 at X = hi
            {
                Enclosure h = h_of(hi);
                Enclosure chi = h / kappa;
                Enclosure c0 = mignotte_c0(kappa, chi, a1_floor, a2);
                Enclosure deriv = E(8) * (c0 + ER(Rat(6, 100))) * mult * (kappa + h) /
                                  Enclosure::from_int(hi, p);
                if (!deriv.definitely_less(Rat(1))) throw Undecided("index bound: derivative guard");
            }
            r.x_star = hi;

            // nu' cap via Lemma 4: (nu'-0.001) G - 0.001 < X* (nu'+2.002) log(alpha2)
            Enclosure G = ER(Rat(2, 57)) * Enclosure::from_int(tr.a(), p).sqrt() * la1;
            Enclosure xl = Enclosure::from_int(hi, p) * la2;
            if (!xl.definitely_less(G)) {
                r.fallback = true;
                r.M = fallback_index_bound();
                r.nu_cap = 0;
                r.note = "gap route does not close at this size: (2/57) sqrt(a) log a1 <= X* log a2";
                return r;
            }
            Enclosure nu_hi = (ER(Rat(1, 1000)) * G + r2002 * xl + ER(Rat(1, 1000))) / (G - xl);
            Int nu_cap = nu_hi.floor_hi() + 1;
            if (nu_cap < 2) nu_cap = 2;
            r.nu_cap = nu_cap;
            Enclosure nstar = Enclosure::from_int(hi, p) *
                              (Enclosure::from_int(nu_cap, p) + r2002) * la2;
            Int n_bound = nstar.floor_hi() + 1;
            // decay variable: n' for c1-, m' = n' + nu' otherwise
            r.M = c1m ? n_bound : n_bound + nu_cap;
            if (r.M < 3) r.M = 3;
            r.note = "certified via per-instance Mignotte + Lemma 4 gap";
            return r;
        });
    } catch (const PrecisionExhausted&) {
        res.fallback = true;
        res.M = fallback_index_bound();
        res.nu_cap = 0;
        res.note = "precision cap during certification";
        return res;
    }
}

// Exhaustive finish: every v_m = w_n with the bounded index at or below
// the bound; the other sequence is walked until its values pass the
// bounded one (they are strictly increasing once positive).  bound_on_n
// selects the c1- normalization, where the certified bound lands on n.
inline std::vector<Int> finish_instance(const DnTriple& tr, const IntersectionCase& cse,
                                        const Int& bound, bool bound_on_n = false) {
    std::vector<Int> ds;
    if (bound < 0) return ds;
    long cap = bound.get_si();
    for (const auto& combo : cse.combos) {
        auto bounded_seq = bound_on_n ? w_sequence(tr, combo) : v_sequence(tr, combo);
        auto other_seq = bound_on_n ? v_sequence(tr, combo) : w_sequence(tr, combo);
        auto bv = bounded_seq.terms(cap + 1);
        Int vmax = bv.empty() ? Int(0) : *std::max_element(bv.begin(), bv.end());
        std::vector<Int> ov;
        ov.push_back(other_seq.term0);
        ov.push_back(other_seq.term1);
        while (!(ov.back() > vmax && ov[ov.size() - 2] > 0)) {
            size_t k = ov.size();
            ov.push_back(other_seq.coeff * ov[k - 1] - ov[k - 2]);
            if (ov.size() > 100000) throw std::logic_error("finish_instance: runaway sequence");
        }
        for (long i = 0; i <= cap; ++i) {
            for (size_t j = 0; j < ov.size(); ++j) {
                if (bv[i] != ov[j]) continue;
                long m = bound_on_n ? static_cast<long>(j) : i;
                long n = bound_on_n ? i : static_cast<long>(j);
                if (!detail::parity_match(cse.parity, m, n)) continue;
                auto d = extension_from_z(tr, bv[i]);
                if (d) ds.push_back(*d);
            }
        }
    }
    std::sort(ds.begin(), ds.end());
    ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
    return ds;
}

// Full per-case pipeline: Mignotte M, iterated reduction to a small
// bound, exhaustive finish.
struct CaseReduction {
    Int M_initial;
    bool mignotte_fallback = false;
    std::vector<Int> bound_trace;
    Int final_bound;
    bool reduced = false;   // reduction reached a small certified bound
    bool undecided = false; // precision cap or epsilon failure
    std::string note;
    std::vector<Int> extensions;
    ReductionOutcome last_outcome;
};

inline CaseReduction reduce_case(const DnTriple& tr, CLabel label, const IntersectionCase& cse,
                                 int max_rounds = 8) {
    CaseReduction out;
    Int M_case = 3;
    bool fallback_any = false;
    // reduce each concrete fundamental pair; the case bound is the max
    for (const auto& combo : cse.combos) {
        LinearFormInstance inst{tr, label, combo, 0, 0};
        IndexBoundResult ib = derive_index_bound(inst);
        fallback_any = fallback_any || ib.fallback;
        if (out.M_initial < ib.M) out.M_initial = ib.M;
        BoundKind kind = label == CLabel::C1m ? BoundKind::lf2 : BoundKind::lf1;
        ReductionInstance rinst{to_reduction_shape(tr, combo, kind), ib.M};
        Int bound = ib.M;
        try {
            for (int round = 0; round < max_rounds; ++round) {
                ReductionOutcome oc = baker_davenport_step(rinst);
                out.last_outcome = oc;
                if (!oc.success) {
                    out.undecided = true;
                    out.note = oc.failure_reason;
                    break;
                }
                out.bound_trace.push_back(oc.new_bound);
                if (oc.new_bound >= bound) break;  // fixed point
                bound = oc.new_bound;
                rinst.M = bound < 3 ? Int(3) : bound;
                if (bound <= 10) break;
            }
        } catch (const PrecisionExhausted& e) {
            out.undecided = true;
            out.note = e.what();
        }
        if (bound > M_case) M_case = bound;
    }
    out.mignotte_fallback = fallback_any;
    out.final_bound = M_case;
    out.reduced = !out.undecided && M_case <= 1000;
    if (out.reduced) out.extensions = finish_instance(tr, cse, M_case);
    return out;
}

} // namespace d4ext
