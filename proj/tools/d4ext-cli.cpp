// d4ext command-line front end: set verification, extension search,
// candidate listing, family catalog, the Proposition-1 constant
// pipeline, single-instance reduction, and the full campaign driver.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "d4ext/campaign.hpp"
#include "d4ext/linforms.hpp"

namespace {

using namespace d4ext;

std::vector<Int> parse_elements(const std::string& csv) {
    std::vector<Int> out;
    std::string cur;
    for (char ch : csv + ",") {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(Int(cur));
            cur.clear();
        } else if (!isspace(static_cast<unsigned char>(ch))) {
            cur += ch;
        }
    }
    return out;
}

int cmd_verify(long n, const std::string& elements) {
    auto elems = parse_elements(elements);
    VerifyResult res = verify_dn_set(Int(n), elems);
    if (res.ok) {
        std::cout << "D(" << n << ") set: yes\n";
        for (const auto& w : res.roots)
            std::cout << "  " << w[0].get_str() << " * " << w[1].get_str() << " + " << n << " = "
                      << w[2].get_str() << "^2\n";
        return 0;
    }
    std::cout << "D(" << n << ") set: no";
    if (res.failing)
        std::cout << "  (" << (*res.failing)[0].get_str() << " * " << (*res.failing)[1].get_str()
                  << " + " << n << " is not a square)";
    std::cout << "\n";
    return 1;
}

int cmd_extend(const std::string& a, const std::string& b, const std::string& c,
               const std::string& limit) {
    auto pair = make_dn_pair(4, Int(a), Int(b));
    if (!pair) {
        std::cerr << "not a D(4)-pair\n";
        return 64;
    }
    auto triple = make_dn_triple(*pair, Int(c));
    if (!triple) {
        std::cerr << "not a D(4)-triple\n";
        return 64;
    }
    for (const auto& d : brute_force_extensions(*triple, Int(limit)))
        std::cout << d.get_str() << "\n";
    return 0;
}

int cmd_clist(const std::string& a, const std::string& b, const std::string& cap, bool campaign) {
    auto pair = make_dn_pair(4, Int(a), Int(b));
    if (!pair) {
        std::cerr << "not a D(4)-pair\n";
        return 64;
    }
    if (campaign) {
        for (const auto& cc : campaign_c_list(*pair))
            std::cout << to_string(cc.label) << "  " << cc.c.get_str() << "\n";
    } else {
        for (const auto& cc : c_candidates(*pair, Int(cap)))
            std::cout << cc.label() << "  " << cc.c.get_str() << "\n";
    }
    return 0;
}

int cmd_families_catalog(const std::string& format, long limit) {
    FamilyCatalog cat = enumerate_families();
    if (!cat.count_matches)
        std::cerr << "catalog count discrepancy: " << cat.discrepancy << "\n";
    long shown = 0;
    if (format == "csv") {
        std::cout << "m,t,a2,a1,a0,b2,b1,b0\n";
        for (const auto& f : cat.families) {
            if (limit > 0 && shown++ >= limit) break;
            std::cout << f.m << ',' << f.t << ',' << f.a_poly[0].get_str() << ','
                      << f.a_poly[1].get_str() << ',' << f.a_poly[2].get_str() << ','
                      << f.b_poly[0].get_str() << ',' << f.b_poly[1].get_str() << ','
                      << f.b_poly[2].get_str() << "\n";
        }
    } else {
        Json arr = Json::array();
        for (const auto& f : cat.families) {
            if (limit > 0 && shown++ >= limit) break;
            arr.push_back({{"m", f.m},
                           {"t", f.t},
                           {"a_poly", {f.a_poly[0].get_str(), f.a_poly[1].get_str(), f.a_poly[2].get_str()}},
                           {"b_poly", {f.b_poly[0].get_str(), f.b_poly[1].get_str(), f.b_poly[2].get_str()}}});
        }
        Json out = {{"count", cat.count},
                    {"expected", cat.expected},
                    {"count_matches", cat.count_matches},
                    {"discrepancy", cat.discrepancy},
                    {"families", arr}};
        std::cout << out.dump(2) << "\n";
    }
    return cat.count_matches ? 0 : 1;
}

int cmd_families_instantiate(long m, long t, const std::string& k) {
    FamilyCatalog cat = enumerate_families();
    auto fam = find_family(cat, m, t);
    if (!fam) {
        std::cerr << "no family (" << m << ", " << t << ")\n";
        return 64;
    }
    Instantiation inst = instantiate(*fam, Int(k));
    std::cout << "a = " << inst.a.get_str() << "\nb = " << inst.b.get_str()
              << "\nr = " << inst.r.get_str() << "\n";
    if (!inst.ok) {
        std::cout << "rejected: " << inst.rejection << "\n";
        return 1;
    }
    std::cout << "in scope\n";
    return 0;
}

int cmd_families_kbound(long m, long t, const std::string& a_max) {
    FamilyCatalog cat = enumerate_families();
    auto fam = find_family(cat, m, t);
    if (!fam) {
        std::cerr << "no family (" << m << ", " << t << ")\n";
        return 64;
    }
    auto kb = k_bound(*fam, Int(a_max));
    if (!kb) {
        std::cout << "none\n";
        return 0;
    }
    std::cout << kb->get_str() << "\n";
    return 0;
}

int cmd_bound() {
    Prop1Result res = proposition1_pipeline();
    for (const auto& chk : res.checks)
        std::cout << (chk.ok ? "  ok   " : (chk.gating ? "  FAIL " : "  note ")) << chk.name
                  << "\n         paper: " << chk.claimed << "\n         here:  " << chk.reproduced
                  << "\n";
    std::cout << "C0 (h >= 35): " << res.c0 << "\n"
              << "threshold: " << res.threshold << "\n"
              << "h < 35 branch: " << res.branch_h_lt_35 << " (printed " << res.branch_floor.get_str()
              << ")\n"
              << "a bound: " << res.a_bound.get_str() << "\n"
              << (res.ok ? "all gating checks reproduced\n" : "GATING CHECK FAILED\n");
    return res.ok ? 0 : 1;
}

int cmd_reduce(long m, long t, const std::string& k, const std::string& label_s) {
    FamilyCatalog cat = enumerate_families();
    auto fam = find_family(cat, m, t);
    if (!fam) {
        std::cerr << "no family (" << m << ", " << t << ")\n";
        return 64;
    }
    auto label = clabel_from_string(label_s);
    if (!label) {
        std::cerr << "unknown c label " << label_s << " (use c1- .. c4-)\n";
        return 64;
    }
    Instantiation inst = instantiate(*fam, Int(k));
    if (!inst.ok) {
        std::cerr << "instantiation rejected: " << inst.rejection << "\n";
        return 64;
    }
    Int c;
    for (const auto& cc : campaign_c_list(*inst.pair))
        if (cc.label == *label) c = cc.c;
    if (c == 0) {
        std::cerr << "label " << label_s << " not positive for this pair\n";
        return 64;
    }
    auto recs = run_instance(*fam, Int(k), *label, c, *inst.pair);
    for (const auto& r : recs) std::cout << r.to_json().dump(2) << "\n";
    for (const auto& r : recs)
        if (r.status != InstanceStatus::Verified) return r.status == InstanceStatus::Discrepancy ? 1 : 2;
    return 0;
}

int cmd_campaign(const std::string& config_path, const std::string& a_max,
                 const std::string& families, const std::string& k_mode, long k_n, uint64_t seed,
                 int workers, const std::string& checkpoint, const std::string& report_path,
                 const std::string& format_s) {
    CampaignConfig cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "cannot read config " << config_path << "\n";
            return 64;
        }
        cfg = CampaignConfig::from_json(Json::parse(in));
    }
    if (!a_max.empty()) cfg.a_max = Int(a_max);
    if (!families.empty()) {
        cfg.family_filter.clear();
        for (const auto& tok : [&] {
                 std::vector<std::string> v;
                 std::string cur;
                 for (char ch : families + ",") {
                     if (ch == ',') {
                         if (!cur.empty()) v.push_back(cur);
                         cur.clear();
                     } else cur += ch;
                 }
                 return v;
             }()) {
            auto colon = tok.find(':');
            if (colon == std::string::npos) {
                std::cerr << "family filter entries look like m:t\n";
                return 64;
            }
            cfg.family_filter.emplace_back(std::stol(tok.substr(0, colon)),
                                           std::stol(tok.substr(colon + 1)));
        }
    }
    if (!k_mode.empty()) {
        if (k_mode == "all") cfg.k_sample.mode = KSample::Mode::All;
        else if (k_mode == "stride") cfg.k_sample.mode = KSample::Mode::Stride;
        else if (k_mode == "random") cfg.k_sample.mode = KSample::Mode::Random;
        else {
            std::cerr << "k mode is all, stride or random\n";
            return 64;
        }
        cfg.k_sample.n = k_n;
        cfg.k_sample.seed = seed;
    }
    if (workers > 0) cfg.worker_count = workers;
    if (!checkpoint.empty()) cfg.checkpoint_path = checkpoint;

    auto fmt = report_format_from_string(format_s.empty() ? "json" : format_s);
    if (!fmt) {
        std::cerr << "report format is json, jsonl or csv\n";
        return 64;
    }

    CampaignReport rep = run_campaign(cfg);
    std::string body = emit_report(rep, *fmt);
    if (report_path.empty()) {
        std::cout << body;
    } else {
        std::ofstream out(report_path);
        out << body;
        std::cout << "report written to " << report_path << "\n";
    }
    std::cout << "verified " << rep.verified << ", discrepancy " << rep.discrepancy
              << ", undecided " << rep.undecided << ", wall " << rep.wall_time_s << "s\n";
    return rep.exit_code();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified verification toolkit for extensions of close D(4)-pairs"};
    app.require_subcommand(1);

    // verify
    long v_n = 4;
    std::string v_elems;
    auto* verify = app.add_subcommand("verify", "check that a set is a D(n)-tuple");
    verify->add_option("--n", v_n, "the D(n) parameter")->capture_default_str();
    verify->add_option("--elements", v_elems, "comma-separated elements")->required();

    // extend
    std::string e_a, e_b, e_c, e_limit = "1000000";
    auto* extend = app.add_subcommand("extend", "brute-force extensions of a D(4)-triple");
    extend->add_option("--a", e_a)->required();
    extend->add_option("--b", e_b)->required();
    extend->add_option("--c", e_c)->required();
    extend->add_option("--limit", e_limit, "search bound for d")->capture_default_str();

    // c-list
    std::string cl_a, cl_b, cl_cap = "1000000";
    bool cl_campaign = false;
    auto* clist = app.add_subcommand("c-list", "third elements extending a D(4)-pair");
    clist->add_option("--a", cl_a)->required();
    clist->add_option("--b", cl_b)->required();
    clist->add_option("--cap", cl_cap, "largest c to emit")->capture_default_str();
    clist->add_flag("--campaign", cl_campaign, "the seven campaign labels c1- .. c4- instead");

    // families
    auto* fam = app.add_subcommand("families", "parametric family catalog");
    std::string fc_format = "json";
    long fc_limit = 0;
    auto* fcat = fam->add_subcommand("catalog", "list the catalog");
    fcat->add_option("--format", fc_format, "json or csv")->capture_default_str();
    fcat->add_option("--limit", fc_limit, "emit at most this many families (0: all)")
        ->capture_default_str();
    long fi_m = 0, fi_t = 0;
    std::string fi_k;
    auto* fins = fam->add_subcommand("instantiate", "evaluate a family at k");
    fins->add_option("--m", fi_m)->required();
    fins->add_option("--t", fi_t)->required();
    fins->add_option("--k", fi_k)->required();
    long fk_m = 0, fk_t = 0;
    std::string fk_amax = "655000000000";
    auto* fkb = fam->add_subcommand("k-bound", "largest k with a(k) <= a-max");
    fkb->add_option("--m", fk_m)->required();
    fkb->add_option("--t", fk_t)->required();
    fkb->add_option("--a-max", fk_amax)->capture_default_str();

    // bound
    app.add_subcommand("bound", "reproduce the linear-forms constant chain and the a bound");

    // reduce
    long r_m = 0, r_t = 0;
    std::string r_k, r_label;
    auto* reduce = app.add_subcommand("reduce", "reduce one (family, k, c-label) instance");
    reduce->add_option("--m", r_m)->required();
    reduce->add_option("--t", r_t)->required();
    reduce->add_option("--k", r_k)->required();
    reduce->add_option("--c-label", r_label, "c1- c1+ c2- c2+ c3- c3+ c4-")->required();

    // campaign
    std::string cp_config, cp_amax, cp_families, cp_kmode, cp_checkpoint, cp_report, cp_format =
        "json";
    long cp_kn = 1;
    uint64_t cp_seed = 0;
    int cp_workers = 0;
    auto* camp = app.add_subcommand("campaign", "run the verification campaign");
    camp->add_option("--config", cp_config, "JSON config mirroring the campaign configuration");
    camp->add_option("--a-max", cp_amax, "bound on a (default 655000000000)");
    camp->add_option("--families", cp_families, "comma-separated m:t filters");
    camp->add_option("--k-mode", cp_kmode, "all, stride or random");
    camp->add_option("--k-n", cp_kn, "stride width or random draw count")->capture_default_str();
    camp->add_option("--seed", cp_seed, "seed for random k sampling")->capture_default_str();
    camp->add_option("--workers", cp_workers, "worker thread count (default 4)");
    camp->add_option("--checkpoint", cp_checkpoint,
                     "checkpoint path (default $D4EXT_CHECKPOINT_DIR/d4ext-checkpoint.jsonl)");
    camp->add_option("--report", cp_report, "write the report here instead of stdout");
    camp->add_option("--format", cp_format, "json, jsonl or csv")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 64;
    }

    try {
        if (verify->parsed()) return cmd_verify(v_n, v_elems);
        if (extend->parsed()) return cmd_extend(e_a, e_b, e_c, e_limit);
        if (clist->parsed()) return cmd_clist(cl_a, cl_b, cl_cap, cl_campaign);
        if (fam->parsed()) {
            if (fcat->parsed()) return cmd_families_catalog(fc_format, fc_limit);
            if (fins->parsed()) return cmd_families_instantiate(fi_m, fi_t, fi_k);
            if (fkb->parsed()) return cmd_families_kbound(fk_m, fk_t, fk_amax);
            std::cerr << "families needs a subcommand (catalog, instantiate, k-bound)\n";
            return 64;
        }
        if (app.get_subcommand("bound")->parsed()) return cmd_bound();
        if (reduce->parsed()) return cmd_reduce(r_m, r_t, r_k, r_label);
        if (camp->parsed())
            return cmd_campaign(cp_config, cp_amax, cp_families, cp_kmode, cp_kn, cp_seed,
                                cp_workers, cp_checkpoint, cp_report, cp_format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 64;
}
