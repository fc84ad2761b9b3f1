#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wshsa/analysis.hpp"
#include "wshsa/model.hpp"
#include "wshsa/rates.hpp"
#include "wshsa/report.hpp"
#include "wshsa/scheme.hpp"
#include "wshsa/security.hpp"
#include "wshsa/synthesis.hpp"

namespace wshsa::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kValidation = 2,
    kSynthesisFailed = 3,
    kChecksFailed = 4,
    kBudgetExceeded = 5,
    kDimensionMismatch = 6,
};

struct Options {
    std::string out;         // report destination; empty = stdout
    std::uint64_t seed = 0;
    std::uint64_t q = 0;     // field override for synthesis
    std::uint64_t budget = 0;  // oracle budget; 0 = default/env
    bool no_closure = false;
    bool synthesize = false;   // verify/audit/simulate without a scheme file
    bool verify_after = false; // synthesize --verify
    bool exhaustive = false;   // verify: require the histogram oracle
    int rounds = 100;
    std::string scheme_out;    // synthesize: scheme file destination
};

inline std::uint64_t effective_budget(const Options& opt) {
    if (opt.budget) return opt.budget;
    if (const char* env = std::getenv("WSHSA_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
    }
    return 1ull << 24;
}

struct CmdResult {
    int code = kOk;
    json report;
    std::string table;  // sweep only
};

inline Instance load_instance(const std::string& path, const Options& opt) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open instance file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ValidationError("malformed instance document " + path + ": " + e.what());
    }
    if (opt.no_closure) doc["auto_close"] = false;
    return Instance::from_json(doc);
}

inline CmdResult cmd_analyze(const std::string& instance_path, const Options& opt) {
    CmdResult res;
    Instance inst = load_instance(instance_path, opt);
    AuxReport aux = quantities(inst);
    res.report["instance"] = instance_section(inst);
    res.report["analysis"] = analysis_section(aux, classify(aux, inst));
    return res;
}

inline CmdResult cmd_rate(const std::string& instance_path, const Options& opt) {
    CmdResult res;
    Instance inst = load_instance(instance_path, opt);
    AuxReport aux = quantities(inst);
    RateResult rate = optimal_rate(inst, aux);
    res.report["instance"] = instance_section(inst);
    res.report["analysis"] = analysis_section(aux, rate.condition);
    res.report["rate"] = rate_section(rate);
    return res;
}

inline CmdResult cmd_synthesize(const std::string& instance_path, const Options& opt) {
    CmdResult res;
    Instance inst = load_instance(instance_path, opt);
    AuxReport aux = quantities(inst);
    RateResult rate = optimal_rate(inst, aux);
    res.report["instance"] = instance_section(inst);
    res.report["analysis"] = analysis_section(aux, rate.condition);
    res.report["rate"] = rate_section(rate);
    if (rate.infeasible()) {
        res.report["scheme"] = "not synthesized: instance is infeasible";
        res.code = kValidation;
        return res;
    }
    SynthesisOptions sopt;
    sopt.seed = opt.seed;
    sopt.q = opt.q;
    LinearScheme scheme = synthesize(inst, aux, rate, sopt);
    res.report["scheme"] = scheme_section(scheme);
    res.report["scheme"]["rate_matches"] = rate.rate_matches(Rational(scheme.Lz, scheme.L));
    if (!opt.scheme_out.empty()) {
        std::ofstream out(opt.scheme_out);
        if (!out) throw SchemeError("cannot write scheme file: " + opt.scheme_out);
        out << scheme_to_json(scheme).dump(2) << "\n";
        res.report["scheme"]["path"] = opt.scheme_out;
    }
    if (opt.verify_after) {
        SecurityReport sec = verify(inst, scheme, effective_budget(opt));
        res.report["security"] = security_section(sec);
        if (!sec.all_pass) res.code = kChecksFailed;
    }
    if (!rate.rate_matches(Rational(scheme.Lz, scheme.L))) res.code = kChecksFailed;
    return res;
}

inline LinearScheme obtain_scheme(const Instance& inst, const AuxReport& aux,
                                  const RateResult& rate, const std::string& scheme_path,
                                  const Options& opt) {
    if (!scheme_path.empty()) return scheme_from_file(scheme_path);
    if (!opt.synthesize)
        throw SchemeError("no scheme file given; pass one or use --synthesize");
    SynthesisOptions sopt;
    sopt.seed = opt.seed;
    sopt.q = opt.q;
    return synthesize(inst, aux, rate, sopt);
}

inline CmdResult cmd_verify(const std::string& instance_path, const std::string& scheme_path,
                            const Options& opt) {
    CmdResult res;
    Instance inst = load_instance(instance_path, opt);
    AuxReport aux = quantities(inst);
    RateResult rate = optimal_rate(inst, aux);
    res.report["instance"] = instance_section(inst);
    res.report["rate"] = rate_section(rate);
    if (rate.infeasible()) {
        res.report["security"] = "instance is infeasible; nothing to verify";
        res.code = kValidation;
        return res;
    }
    LinearScheme scheme = obtain_scheme(inst, aux, rate, scheme_path, opt);
    res.report["scheme"] = scheme_section(scheme);
    bool rate_ok = rate.rate_matches(Rational(scheme.Lz, scheme.L));
    res.report["scheme"]["rate_matches"] = rate_ok;
    SecurityReport sec = verify(inst, scheme, effective_budget(opt));
    res.report["security"] = security_section(sec);
    if (opt.exhaustive && !sec.oracle_ran) {
        res.report["security"]["oracle"] = "state space exceeds the enumeration budget";
        res.code = kBudgetExceeded;
        return res;
    }
    if (!sec.all_pass || !rate_ok) res.code = kChecksFailed;
    return res;
}

inline CmdResult cmd_simulate(const std::string& instance_path, const std::string& scheme_path,
                              const Options& opt) {
    CmdResult res;
    Instance inst = load_instance(instance_path, opt);
    AuxReport aux = quantities(inst);
    RateResult rate = optimal_rate(inst, aux);
    res.report["instance"] = instance_section(inst);
    if (rate.infeasible()) {
        res.report["simulation"] = "instance is infeasible; nothing to simulate";
        res.code = kValidation;
        return res;
    }
    LinearScheme scheme = obtain_scheme(inst, aux, rate, scheme_path, opt);
    res.report["scheme"] = scheme_section(scheme);
    std::mt19937_64 seeder(opt.seed);
    int correct = 0;
    for (int i = 0; i < opt.rounds; ++i) {
        ProtocolTrace t = run_random_round(scheme, seeder());
        if (t.correct) ++correct;
    }
    json sim;
    sim["rounds"] = opt.rounds;
    sim["correct"] = correct;
    sim["seed"] = opt.seed;
    res.report["simulation"] = sim;
    if (correct != opt.rounds) res.code = kChecksFailed;
    return res;
}

inline CmdResult cmd_audit(const std::string& instance_path, const std::string& scheme_path,
                           const Options& opt) {
    CmdResult res;
    Instance inst = load_instance(instance_path, opt);
    AuxReport aux = quantities(inst);
    RateResult rate = optimal_rate(inst, aux);
    res.report["instance"] = instance_section(inst);
    if (rate.infeasible()) {
        res.report["audit"] = "instance is infeasible; nothing to audit";
        res.code = kValidation;
        return res;
    }
    LinearScheme scheme = obtain_scheme(inst, aux, rate, scheme_path, opt);
    res.report["scheme"] = scheme_section(scheme);
    SecurityReport sec = verify(inst, scheme, effective_budget(opt));
    res.report["security"] = security_section(sec);
    LemmaAudit audit = audit_lemmas(inst, scheme, aux);
    res.report["audit"] = audit_section(audit);
    if (!sec.all_pass || !audit.all_hold) res.code = kChecksFailed;
    return res;
}

inline CmdResult cmd_sweep(const std::string& dir, const Options& opt) {
    CmdResult res;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    json rows = json::array();
    std::ostringstream table;
    table << std::left << std::setw(24) << "instance" << std::setw(12) << "class"
          << std::setw(14) << "rate" << std::setw(12) << "synthesis" << std::setw(10)
          << "verify" << std::setw(8) << "audit" << "rate_match" << "\n";
    bool any_bad = false;
    bool any_rate_mismatch = false;
    for (const auto& path : files) {
        json row;
        std::string name = path.filename().string();
        row["instance"] = name;
        std::string cls = "-", rate_text = "-", synth = "-", ver = "-", aud = "-", match = "-";
        try {
            Instance inst = load_instance(path.string(), opt);
            AuxReport aux = quantities(inst);
            RateResult rate = optimal_rate(inst, aux);
            cls = to_string(rate.condition);
            rate_text = describe(rate);
            if (rate.infeasible()) {
                synth = "skipped";
            } else {
                SynthesisOptions sopt;
                sopt.seed = opt.seed;
                sopt.q = opt.q;
                try {
                    LinearScheme scheme = synthesize(inst, aux, rate, sopt);
                    synth = "ok";
                    SecurityReport sec = verify(inst, scheme);
                    ver = sec.all_pass ? "pass" : "FAIL";
                    LemmaAudit audit = audit_lemmas(inst, scheme, aux);
                    aud = audit.all_hold ? "pass" : "FAIL";
                    bool ok = rate.rate_matches(Rational(scheme.Lz, scheme.L));
                    match = ok ? "yes" : "NO";
                    if (!ok) any_rate_mismatch = true;
                    if (!sec.all_pass || !audit.all_hold || !ok) any_bad = true;
                } catch (const SynthesisError& e) {
                    synth = "FAILED";
                    row["error"] = e.what();
                    any_bad = true;
                }
            }
        } catch (const std::exception& e) {
            cls = "error";
            row["error"] = e.what();
            any_bad = true;
        }
        row["class"] = cls;
        row["rate"] = rate_text;
        row["synthesis"] = synth;
        row["verify"] = ver;
        row["audit"] = aud;
        row["rate_match"] = match;
        rows.push_back(row);
        table << std::left << std::setw(24) << name << std::setw(12) << cls << std::setw(14)
              << rate_text << std::setw(12) << synth << std::setw(10) << ver << std::setw(8)
              << aud << match << "\n";
    }
    res.report["sweep"] = rows;
    res.table = table.str();
    if (any_rate_mismatch || any_bad) res.code = kChecksFailed;
    return res;
}

}  // namespace wshsa::cli
