#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "wshsa/analysis.hpp"
#include "wshsa/lp.hpp"
#include "wshsa/rational.hpp"

namespace wshsa {

/// Optimal total key rate (or bounds, under C3) plus everything synthesis
/// needs: the integer backbone, the LP fractional part, and per-user rates.
struct RateResult {
    enum class Kind { Infeasible, Exact, Bounds };
    Kind kind = Kind::Infeasible;
    Condition condition = Condition::Infeasible;

    Rational exact;        // valid when kind == Exact
    Rational lower, upper; // valid when kind == Bounds

    int a_star = 0;
    int d_star = 0;
    int d_adj = 0;
    Rational fractional;   // b* (C2) or l* (C3), 0 otherwise

    std::map<UserId, Rational> per_user;

    bool infeasible() const { return kind == Kind::Infeasible; }

    /// Rate a synthesized scheme is built against: the exact rate, or the C3
    /// upper bound (the achievable side).
    Rational target_rate() const {
        if (kind == Kind::Exact) return exact;
        if (kind == Kind::Bounds) return upper;
        throw std::logic_error("no target rate for an infeasible instance");
    }

    bool rate_matches(const Rational& achieved) const {
        if (kind == Kind::Exact) return achieved == exact;
        if (kind == Kind::Bounds) return achieved >= lower && achieved <= upper;
        return false;
    }
};

inline std::string describe(const RateResult& r) {
    switch (r.kind) {
        case RateResult::Kind::Infeasible: return "infeasible";
        case RateResult::Kind::Exact: return to_string(r.exact) + " (exact)";
        case RateResult::Kind::Bounds:
            return "[" + to_string(r.lower) + ", " + to_string(r.upper) + "] (bounds)";
    }
    return "?";
}

inline RateResult optimal_rate(const Instance& inst, const AuxReport& rep) {
    RateResult out;
    out.condition = classify(rep, inst);
    out.a_star = rep.a_star;
    out.d_star = rep.d_star;
    out.d_adj = rep.d_adj;
    if (out.condition == Condition::Infeasible) return out;

    const Rational base = std::max(rep.a_star, rep.d_adj);
    for (const auto& id : rep.s_total.members()) out.per_user[id] = 1;
    const UserSet outside = set_difference(inst.all_users(), rep.s_total);
    for (const auto& id : outside.members()) out.per_user[id] = 0;

    switch (out.condition) {
        case Condition::C1Case2:
        case Condition::C1Case3:
        case Condition::C1Case4: {
            out.kind = RateResult::Kind::Exact;
            out.exact = base;
            break;
        }
        case Condition::C2: {
            auto frac = solve_thm2(inst, rep);
            out.kind = RateResult::Kind::Exact;
            out.fractional = frac.optimum;
            out.exact = base + frac.optimum;
            for (const auto& [id, b] : frac.assignment) out.per_user[id] = b;
            break;
        }
        case Condition::C3: {
            auto frac = solve_thm3(inst, rep);
            out.kind = RateResult::Kind::Bounds;
            out.fractional = frac.optimum;
            out.lower = base;
            out.upper = base + frac.optimum;
            for (const auto& [id, l] : frac.assignment) out.per_user[id] = l;
            break;
        }
        default:
            break;
    }
    return out;
}

inline RateResult optimal_rate(const Instance& inst) {
    return optimal_rate(inst, quantities(inst));
}

/// Cut-set lower bounds on both hops, achieved by every synthesized scheme.
inline std::pair<Rational, Rational> communication_rates(const Instance& inst,
                                                         const RateResult& result) {
    (void)inst;
    if (result.infeasible()) throw std::logic_error("infeasible instance has no scheme rates");
    return {Rational(1), Rational(1)};
}

/// Full-size keys on S̄, LP-profiled keys outside it (C2/C3), zero otherwise.
inline std::map<UserId, Rational> per_user_key_profile(const Instance& inst,
                                                       const RateResult& result) {
    (void)inst;
    if (result.infeasible()) throw std::logic_error("infeasible instance has no key profile");
    return result.per_user;
}

}  // namespace wshsa
