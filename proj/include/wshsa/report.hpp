#pragma once

#include <cstdint>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wshsa/analysis.hpp"
#include "wshsa/lp.hpp"
#include "wshsa/model.hpp"
#include "wshsa/rates.hpp"
#include "wshsa/scheme.hpp"
#include "wshsa/security.hpp"

namespace wshsa {

/// FNV-1a 64-bit over the canonical serialization: a stable content digest.
inline std::string digest(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

inline std::string instance_digest(const Instance& inst) {
    return digest(inst.to_json().dump());
}

inline std::string scheme_digest(const LinearScheme& s) {
    return digest(scheme_to_json(s).dump());
}

inline json userset_to_json(const UserSet& s) {
    json arr = json::array();
    for (const auto& id : s.members()) arr.push_back(json::array({id.u, id.v}));
    return arr;
}

inline json instance_section(const Instance& inst) {
    json j;
    j["digest"] = instance_digest(inst);
    j["clusters"] = inst.cluster_sizes();
    j["K"] = inst.num_users();
    j["M"] = inst.num_security_sets();
    j["N"] = inst.num_collusion_sets();
    return j;
}

inline json analysis_section(const AuxReport& rep, Condition cls) {
    json j;
    j["s_implicit_relay"] = userset_to_json(rep.s_implicit_relay);
    j["s_implicit_server"] = userset_to_json(rep.s_implicit_server);
    j["s_implicit"] = userset_to_json(rep.s_implicit);
    j["s_total"] = userset_to_json(rep.s_total);
    j["s_total_size"] = rep.s_total.size();
    j["a_star"] = rep.a_star;
    j["e_star"] = rep.e_star;
    j["d_star"] = rep.d_star;
    j["d_adj"] = rep.d_adj;
    json a_arg = json::array();
    for (const auto& t : rep.a_argmax) a_arg.push_back(json::array({t.u, t.m, t.n}));
    j["a_argmax"] = a_arg;
    json e_arg = json::array();
    for (const auto& p : rep.e_argmax) e_arg.push_back(json::array({p.m, p.n}));
    j["e_argmax"] = e_arg;
    json d_arg = json::array();
    for (const auto& p : rep.d_argmax) d_arg.push_back(json::array({p.m, p.n}));
    j["d_argmax"] = d_arg;
    j["q1"] = userset_to_json(rep.q1);
    j["q2"] = userset_to_json(rep.q2);
    j["q3"] = userset_to_json(rep.q3);
    j["q"] = userset_to_json(rep.q);
    j["q_size"] = rep.q.size();
    json relays = json::array();
    for (int m = 0; m < static_cast<int>(rep.relay_sets.size()); ++m) {
        json row = json::array();
        for (int n = 0; n < static_cast<int>(rep.relay_sets[m].size()); ++n) {
            json cell;
            cell["relays"] = rep.relay_sets[m][n];
            cell["coverage_full"] = static_cast<bool>(rep.coverage_full[m][n]);
            row.push_back(cell);
        }
        relays.push_back(row);
    }
    j["security_relay_sets"] = relays;
    j["class"] = to_string(cls);
    return j;
}

inline json rate_section(const RateResult& r) {
    json j;
    j["class"] = to_string(r.condition);
    switch (r.kind) {
        case RateResult::Kind::Infeasible:
            j["kind"] = "infeasible";
            break;
        case RateResult::Kind::Exact:
            j["kind"] = "exact";
            j["optimal_total_key_rate"] = to_string(r.exact);
            break;
        case RateResult::Kind::Bounds:
            j["kind"] = "bounds";
            j["lower"] = to_string(r.lower);
            j["upper"] = to_string(r.upper);
            break;
    }
    j["a_star"] = r.a_star;
    j["d_star"] = r.d_star;
    j["d_adj"] = r.d_adj;
    j["fractional"] = to_string(r.fractional);
    if (!r.infeasible()) {
        j["Rx"] = "1";
        j["Ry"] = "1";
        json per = json::object();
        for (const auto& [id, v] : r.per_user) per[to_string(id)] = to_string(v);
        j["per_user_key_rates"] = per;
    }
    return j;
}

inline json scheme_section(const LinearScheme& s) {
    json j;
    j["digest"] = scheme_digest(s);
    j["q"] = s.q;
    j["L"] = s.L;
    j["Lz"] = s.Lz;
    j["achieved_rate"] = to_string(Rational(s.Lz, s.L));
    return j;
}

inline json security_section(const SecurityReport& rep) {
    json j;
    j["all_pass"] = rep.all_pass;
    j["correctness"] = rep.correctness;
    j["max_cmi"] = rep.max_cmi();
    j["skipped_pairs"] = rep.skipped_pairs;
    json relay = json::array();
    for (const auto& c : rep.relay_checks) {
        json e;
        e["u"] = c.u;
        e["m"] = c.m;
        e["n"] = c.n;
        e["cmi"] = c.cmi;
        e["pass"] = (c.cmi == 0);
        relay.push_back(e);
    }
    j["relay_checks"] = relay;
    json server = json::array();
    for (const auto& c : rep.server_checks) {
        json e;
        e["m"] = c.m;
        e["n"] = c.n;
        e["cmi"] = c.cmi;
        e["pass"] = (c.cmi == 0);
        server.push_back(e);
    }
    j["server_checks"] = server;
    if (rep.oracle_ran) {
        json o;
        o["checks"] = rep.oracle_checks;
        o["mismatches"] = rep.oracle_mismatches;
        j["oracle"] = o;
    }
    return j;
}

inline json audit_section(const LemmaAudit& audit) {
    json j;
    j["all_hold"] = audit.all_hold;
    j["checks"] = audit.checks.size();
    json rows = json::array();
    for (const auto& c : audit.checks) {
        json e;
        e["rule"] = c.rule;
        e["where"] = c.where;
        e["lhs"] = c.lhs;
        e["bound"] = c.bound;
        e["slack"] = c.slack();
        e["ok"] = c.ok();
        rows.push_back(e);
    }
    j["inequalities"] = rows;
    return j;
}

}  // namespace wshsa
