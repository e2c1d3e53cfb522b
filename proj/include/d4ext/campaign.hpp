#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "d4ext/families.hpp"
#include "d4ext/reduction.hpp"

namespace d4ext {

using Json = nlohmann::ordered_json;

struct KSample {
    enum class Mode { All, Stride, Random };
    Mode mode = Mode::All;
    long n = 1;         // stride width or random draw count
    uint64_t seed = 0;  // random mode only

    std::string str() const {
        switch (mode) {
            case Mode::All: return "all";
            case Mode::Stride: return "stride " + std::to_string(n);
            case Mode::Random: return "random " + std::to_string(n) + " seed " + std::to_string(seed);
        }
        return "?";
    }
};

struct CampaignConfig {
    Int a_max = Int("655000000000");
    std::vector<std::pair<long, long>> family_filter;  // empty: every family
    KSample k_sample;
    long precision_cap_bits = kPrecisionCapBits;
    int worker_count = 4;
    std::string checkpoint_path;  // empty: default location

    static std::string default_checkpoint_path() {
        if (const char* dir = std::getenv("D4EXT_CHECKPOINT_DIR"))
            return std::string(dir) + "/d4ext-checkpoint.jsonl";
        return "d4ext-checkpoint.jsonl";
    }

    std::string checkpoint() const {
        return checkpoint_path.empty() ? default_checkpoint_path() : checkpoint_path;
    }

    Json to_json() const {
        Json j;
        j["a_max"] = a_max.get_str();
        Json ff = Json::array();
        for (auto& [m, t] : family_filter) ff.push_back({{"m", m}, {"t", t}});
        j["family_filter"] = ff;
        j["k_sample"] = k_sample.str();
        j["precision_cap_bits"] = precision_cap_bits;
        j["worker_count"] = worker_count;
        j["checkpoint_path"] = checkpoint();
        return j;
    }

    static CampaignConfig from_json(const Json& j) {
        CampaignConfig c;
        if (j.contains("a_max")) c.a_max = Int(j["a_max"].get<std::string>());
        if (j.contains("family_filter"))
            for (const auto& e : j["family_filter"])
                c.family_filter.emplace_back(e["m"].get<long>(), e["t"].get<long>());
        if (j.contains("k_sample")) {
            std::istringstream ss(j["k_sample"].get<std::string>());
            std::string mode;
            ss >> mode;
            if (mode == "all") c.k_sample.mode = KSample::Mode::All;
            else if (mode == "stride") {
                c.k_sample.mode = KSample::Mode::Stride;
                ss >> c.k_sample.n;
            } else if (mode == "random") {
                c.k_sample.mode = KSample::Mode::Random;
                std::string seedword;
                ss >> c.k_sample.n >> seedword >> c.k_sample.seed;
            }
        }
        if (j.contains("precision_cap_bits")) c.precision_cap_bits = j["precision_cap_bits"].get<long>();
        if (j.contains("worker_count")) c.worker_count = j["worker_count"].get<int>();
        if (j.contains("checkpoint_path")) c.checkpoint_path = j["checkpoint_path"].get<std::string>();
        return c;
    }
};

enum class InstanceStatus { Verified, Discrepancy, Undecided };

inline std::string to_string(InstanceStatus s) {
    switch (s) {
        case InstanceStatus::Verified: return "verified";
        case InstanceStatus::Discrepancy: return "discrepancy";
        case InstanceStatus::Undecided: return "undecided";
    }
    return "?";
}

struct InstanceRecord {
    long family_m = 0;
    long family_t = 0;
    Int k;
    Int a, b;
    CLabel c_label = CLabel::C1m;
    Int c;
    std::string case_id;  // parity class of the intersection case
    Int M_initial;
    bool mignotte_fallback = false;
    Int reduced_bound;
    std::vector<Int> extensions;
    Int d_plus, d_minus;
    InstanceStatus status = InstanceStatus::Undecided;
    std::string note;
    double wall_ms = 0;
    int cases_in_unit = 1;  // records sharing (m,t,k,c_label); resume needs all

    std::string key() const {
        return std::to_string(family_m) + ":" + std::to_string(family_t) + ":" + k.get_str() +
               ":" + d4ext::to_string(c_label) + ":" + case_id;
    }

    Json to_json() const {
        Json j;
        j["schema_version"] = 1;
        j["family"] = {{"m", family_m}, {"t", family_t}};
        j["k"] = k.get_str();
        j["pair"] = {{"a", a.get_str()}, {"b", b.get_str()}};
        j["c_label"] = d4ext::to_string(c_label);
        j["c"] = c.get_str();
        j["case"] = case_id;
        j["M_initial"] = M_initial.get_str();
        j["mignotte_fallback"] = mignotte_fallback;
        j["reduced_bound"] = reduced_bound.get_str();
        Json ext = Json::array();
        for (const auto& d : extensions) ext.push_back(d.get_str());
        j["extensions"] = ext;
        j["d_plus"] = d_plus.get_str();
        j["d_minus"] = d_minus.get_str();
        j["status"] = d4ext::to_string(status);
        j["note"] = note;
        j["wall_ms"] = wall_ms;
        j["cases_in_unit"] = cases_in_unit;
        return j;
    }

    static InstanceRecord from_json(const Json& j) {
        InstanceRecord r;
        r.family_m = j["family"]["m"].get<long>();
        r.family_t = j["family"]["t"].get<long>();
        r.k = Int(j["k"].get<std::string>());
        r.a = Int(j["pair"]["a"].get<std::string>());
        r.b = Int(j["pair"]["b"].get<std::string>());
        r.c_label = *clabel_from_string(j["c_label"].get<std::string>());
        r.c = Int(j["c"].get<std::string>());
        r.case_id = j["case"].get<std::string>();
        r.M_initial = Int(j["M_initial"].get<std::string>());
        r.mignotte_fallback = j["mignotte_fallback"].get<bool>();
        r.reduced_bound = Int(j["reduced_bound"].get<std::string>());
        for (const auto& e : j["extensions"]) r.extensions.push_back(Int(e.get<std::string>()));
        r.d_plus = Int(j["d_plus"].get<std::string>());
        r.d_minus = Int(j["d_minus"].get<std::string>());
        r.status = j["status"] == "verified"
                       ? InstanceStatus::Verified
                       : (j["status"] == "discrepancy" ? InstanceStatus::Discrepancy
                                                       : InstanceStatus::Undecided);
        r.note = j.value("note", "");
        r.wall_ms = j.value("wall_ms", 0.0);
        r.cases_in_unit = j.value("cases_in_unit", 1);
        return r;
    }
};

struct CampaignReport {
    int schema_version = 1;
    Json config_echo;
    std::vector<InstanceRecord> records;
    long verified = 0;
    long discrepancy = 0;
    long undecided = 0;
    double wall_time_s = 0;

    Json to_json() const {
        Json j;
        j["schema_version"] = schema_version;
        j["config_echo"] = config_echo;
        Json rec = Json::array();
        for (const auto& r : records) rec.push_back(r.to_json());
        j["records"] = rec;
        j["summary"] = {{"verified", verified},
                        {"discrepancy", discrepancy},
                        {"undecided", undecided},
                        {"wall_time_s", wall_time_s}};
        return j;
    }

    int exit_code() const {
        if (discrepancy > 0) return 1;
        if (undecided > 0) return 2;
        return 0;
    }
};

// status rule: verified iff extensions are a subset of {d-, d+} with
// every extension above c equal to d+, each re-verified as a quadruple
inline InstanceStatus classify_extensions(const DnTriple& tr, const std::vector<Int>& exts,
                                          const Int& d_plus, const Int& d_minus) {
    Int cmax = std::max({tr.a(), tr.b(), tr.c});
    for (const Int& d : exts) {
        if (d != d_plus && d != d_minus) return InstanceStatus::Discrepancy;
        if (d > cmax && d != d_plus) return InstanceStatus::Discrepancy;
        std::vector<Int> elems{tr.a(), tr.b(), tr.c, d};
        if (!verify_dn_set(tr.n(), elems).ok) return InstanceStatus::Discrepancy;
    }
    return InstanceStatus::Verified;
}

// one (family, k, c label) unit of work; produces a record per case
inline std::vector<InstanceRecord> run_instance(const ParametricFamily& fam, const Int& k,
                                                CLabel label, const Int& c, const DnPair& pair) {
    std::vector<InstanceRecord> out;
    auto t0 = std::chrono::steady_clock::now();
    auto triple = make_dn_triple(pair, c);
    if (!triple) {
        InstanceRecord r;
        r.family_m = fam.m;
        r.family_t = fam.t;
        r.k = k;
        r.a = pair.a;
        r.b = pair.b;
        r.c_label = label;
        r.c = c;
        r.case_id = "invalid-triple";
        r.status = InstanceStatus::Discrepancy;
        r.note = "candidate c does not form a D(4)-triple";
        out.push_back(std::move(r));
        return out;
    }
    DPlusMinus dpm = d_plus_minus(*triple);
    for (const auto& cse : admissible_cases(*triple, label)) {
        InstanceRecord r;
        r.family_m = fam.m;
        r.family_t = fam.t;
        r.k = k;
        r.a = pair.a;
        r.b = pair.b;
        r.c_label = label;
        r.c = c;
        r.case_id = to_string(cse.parity);
        r.d_plus = dpm.d_plus;
        r.d_minus = dpm.d_minus;
        CaseReduction red = reduce_case(*triple, label, cse);
        r.M_initial = red.M_initial;
        r.mignotte_fallback = red.mignotte_fallback;
        r.reduced_bound = red.final_bound;
        r.extensions = red.extensions;
        r.note = red.note;
        if (!red.reduced) {
            r.status = InstanceStatus::Undecided;
        } else {
            r.status = classify_extensions(*triple, red.extensions, dpm.d_plus, dpm.d_minus);
        }
        auto t1 = std::chrono::steady_clock::now();
        r.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        out.push_back(std::move(r));
    }
    for (auto& r : out) r.cases_in_unit = static_cast<int>(out.size());
    return out;
}

struct WorkUnit {
    ParametricFamily fam;
    Int k;
    CLabel label;
    Int c;
    DnPair pair;
};

inline std::vector<Int> sample_ks(const ParametricFamily& fam, const CampaignConfig& cfg) {
    auto lo = first_in_scope_k(fam, cfg.a_max);
    auto hi = k_bound(fam, cfg.a_max);
    std::vector<Int> ks;
    if (!lo || !hi || *lo > *hi) return ks;
    switch (cfg.k_sample.mode) {
        case KSample::Mode::All:
            for (Int k = *lo; k <= *hi; k += 1) ks.push_back(k);
            break;
        case KSample::Mode::Stride: {
            Int step = std::max<long>(cfg.k_sample.n, 1L);
            for (Int k = *lo; k <= *hi; k += step) ks.push_back(k);
            break;
        }
        case KSample::Mode::Random: {
            std::mt19937_64 rng(cfg.k_sample.seed ^ (uint64_t(fam.m) << 20) ^ uint64_t(fam.t));
            Int span = *hi - *lo;
            long span_l = mpz_fits_slong_p(span.get_mpz_t()) ? span.get_si()
                                                             : std::numeric_limits<long>::max() / 2;
            std::uniform_int_distribution<long> dist(0, span_l);
            std::set<Int> chosen;
            for (long i = 0; i < cfg.k_sample.n && (long)chosen.size() <= span_l; ++i)
                chosen.insert(*lo + dist(rng));
            ks.assign(chosen.begin(), chosen.end());
            break;
        }
    }
    // keep only k that instantiate cleanly (holes rejected inside the range)
    std::vector<Int> valid;
    for (const auto& k : ks)
        if (instantiate(fam, k).ok) valid.push_back(k);
    return valid;
}

inline CampaignReport run_campaign(const CampaignConfig& cfg) {
    auto wall0 = std::chrono::steady_clock::now();
    CampaignReport report;
    report.config_echo = cfg.to_json();

    FamilyCatalog cat = enumerate_families();
    std::vector<ParametricFamily> fams;
    if (cfg.family_filter.empty()) {
        fams = cat.families;
    } else {
        for (auto& [m, t] : cfg.family_filter)
            if (auto f = find_family(cat, m, t)) fams.push_back(*f);
    }

    // resume: previously completed instances keyed by (m,t,k,label,case)
    std::map<std::string, InstanceRecord> done;
    {
        std::ifstream in(cfg.checkpoint());
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            try {
                InstanceRecord r = InstanceRecord::from_json(Json::parse(line));
                done[r.key()] = r;
            } catch (...) {
                // torn tail line from a killed run; ignore and recompute
            }
        }
    }

    std::vector<WorkUnit> units;
    for (const auto& fam : fams) {
        for (const Int& k : sample_ks(fam, cfg)) {
            Instantiation inst = instantiate(fam, k);
            if (!inst.ok) continue;
            for (const auto& cc : campaign_c_list(*inst.pair))
                units.push_back({fam, k, cc.label, cc.c, *inst.pair});
        }
    }

    std::mutex out_mutex;
    std::ofstream ckpt(cfg.checkpoint(), std::ios::app);
    if (!ckpt) throw std::runtime_error("cannot open checkpoint " + cfg.checkpoint());
    std::vector<InstanceRecord> fresh;
    std::atomic<size_t> next{0};
    int workers = std::max(1, cfg.worker_count);

    auto worker = [&]() {
        while (true) {
            size_t idx = next.fetch_add(1);
            if (idx >= units.size()) break;
            const WorkUnit& u = units[idx];
            // skip units whose full case set is checkpointed (a torn tail
            // line shows up as a partial set and forces recomputation)
            {
                std::string prefix = std::to_string(u.fam.m) + ":" + std::to_string(u.fam.t) +
                                     ":" + u.k.get_str() + ":" + to_string(u.label) + ":";
                int have = 0, expected = -1;
                for (auto it = done.lower_bound(prefix); it != done.end(); ++it) {
                    if (it->first.rfind(prefix, 0) != 0) break;
                    ++have;
                    expected = it->second.cases_in_unit;
                }
                if (have > 0 && have == expected) continue;
            }
            std::vector<InstanceRecord> recs = run_instance(u.fam, u.k, u.label, u.c, u.pair);
            std::lock_guard<std::mutex> lk(out_mutex);
            for (auto& r : recs) {
                ckpt << r.to_json().dump() << "\n";
                fresh.push_back(std::move(r));
            }
            ckpt.flush();
        }
        mpfr_free_cache();
    };

    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    // merge checkpointed + fresh, restricted to this run's selection
    std::set<std::string> selected;
    for (const auto& u : units) {
        std::string prefix = std::to_string(u.fam.m) + ":" + std::to_string(u.fam.t) + ":" +
                             u.k.get_str() + ":" + to_string(u.label) + ":";
        selected.insert(prefix);
    }
    std::map<std::string, InstanceRecord> merged;
    auto consider = [&](const InstanceRecord& r) {
        std::string prefix = std::to_string(r.family_m) + ":" + std::to_string(r.family_t) + ":" +
                             r.k.get_str() + ":" + d4ext::to_string(r.c_label) + ":";
        if (selected.count(prefix)) merged[r.key()] = r;
    };
    for (const auto& [k, r] : done) consider(r);
    for (const auto& r : fresh) consider(r);

    for (auto& [k, r] : merged) report.records.push_back(r);
    for (const auto& r : report.records) {
        switch (r.status) {
            case InstanceStatus::Verified: ++report.verified; break;
            case InstanceStatus::Discrepancy: ++report.discrepancy; break;
            case InstanceStatus::Undecided: ++report.undecided; break;
        }
    }
    auto wall1 = std::chrono::steady_clock::now();
    report.wall_time_s = std::chrono::duration<double>(wall1 - wall0).count();
    return report;
}

enum class ReportFormat { JsonFmt, JsonlFmt, CsvFmt };

inline std::optional<ReportFormat> report_format_from_string(const std::string& s) {
    if (s == "json") return ReportFormat::JsonFmt;
    if (s == "jsonl") return ReportFormat::JsonlFmt;
    if (s == "csv") return ReportFormat::CsvFmt;
    return std::nullopt;
}

inline std::string emit_report(const CampaignReport& rep, ReportFormat fmt) {
    switch (fmt) {
        case ReportFormat::JsonFmt: return rep.to_json().dump(2) + "\n";
        case ReportFormat::JsonlFmt: {
            std::string out;
            for (const auto& r : rep.records) out += r.to_json().dump() + "\n";
            return out;
        }
        case ReportFormat::CsvFmt: {
            std::string out =
                "schema_version,family_m,family_t,k,a,b,c_label,c,case,M_initial,"
                "mignotte_fallback,reduced_bound,extensions,d_plus,d_minus,status,note,wall_ms\n";
            for (const auto& r : rep.records) {
                std::string exts;
                for (size_t i = 0; i < r.extensions.size(); ++i)
                    exts += (i ? ";" : "") + r.extensions[i].get_str();
                std::ostringstream line;
                line << 1 << ',' << r.family_m << ',' << r.family_t << ',' << r.k.get_str() << ','
                     << r.a.get_str() << ',' << r.b.get_str() << ',' << d4ext::to_string(r.c_label)
                     << ',' << r.c.get_str() << ',' << r.case_id << ',' << r.M_initial.get_str()
                     << ',' << (r.mignotte_fallback ? 1 : 0) << ',' << r.reduced_bound.get_str()
                     << ',' << exts << ',' << r.d_plus.get_str() << ',' << r.d_minus.get_str()
                     << ',' << d4ext::to_string(r.status) << ',' << '"' << r.note << '"' << ','
                     << r.wall_ms << "\n";
                out += line.str();
            }
            return out;
        }
    }
    return {};
}

} // namespace d4ext
