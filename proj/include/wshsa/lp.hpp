#pragma once

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wshsa/analysis.hpp"
#include "wshsa/model.hpp"
#include "wshsa/rational.hpp"

namespace wshsa {

/// minimize objective·x subject to coeffs·x >= rhs per row, x >= 0.
struct LpProblem {
    struct Row {
        std::vector<Rational> coeffs;
        Rational rhs;
        std::string label;
    };
    std::vector<std::string> var_names;
    std::vector<Rational> objective;
    std::vector<Row> rows;

    std::size_t num_vars() const { return var_names.size(); }

    std::string debug_text() const {
        std::ostringstream os;
        os << "min";
        for (std::size_t j = 0; j < objective.size(); ++j)
            if (objective[j] != 0) os << " " << to_string(objective[j]) << "*" << var_names[j];
        os << "\n";
        for (const auto& row : rows) {
            bool first = true;
            for (std::size_t j = 0; j < row.coeffs.size(); ++j) {
                if (row.coeffs[j] == 0) continue;
                if (!first) os << " + ";
                if (row.coeffs[j] != 1) os << to_string(row.coeffs[j]) << "*";
                os << var_names[j];
                first = false;
            }
            if (first) os << "0";
            os << " >= " << to_string(row.rhs);
            if (!row.label.empty()) os << "   [" << row.label << "]";
            os << "\n";
        }
        return os.str();
    }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

inline std::string to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
    }
    return "?";
}

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Rational objective;
    std::vector<Rational> x;
};

namespace detail {

/// Dense exact-arithmetic tableau. Bland's rule throughout, so every pivot
/// sequence is deterministic and cycling-free.
class SimplexTableau {
public:
    // columns: structural vars, slacks, artificials, rhs
    SimplexTableau(const LpProblem& lp)
        : n_(lp.num_vars()), m_(lp.rows.size()), cols_(n_ + 2 * m_ + 1) {
        rows_.assign(m_, std::vector<Rational>(cols_, Rational(0)));
        basis_.assign(m_, 0);
        for (std::size_t i = 0; i < m_; ++i) {
            const auto& row = lp.rows[i];
            // Ax >= b  ->  Ax - s = b. If b < 0 negate so rhs stays nonnegative.
            Rational sign = row.rhs < 0 ? Rational(-1) : Rational(1);
            for (std::size_t j = 0; j < n_; ++j) rows_[i][j] = sign * row.coeffs[j];
            rows_[i][n_ + i] = sign * Rational(-1);  // surplus
            rows_[i][n_ + m_ + i] = 1;               // artificial
            rows_[i][cols_ - 1] = sign * row.rhs;
            basis_[i] = static_cast<int>(n_ + m_ + i);
        }
    }

    /// Phase 1: minimize the artificial sum. Returns false when infeasible.
    bool phase1() {
        std::vector<Rational> cost(cols_ - 1, Rational(0));
        for (std::size_t j = n_ + m_; j < n_ + 2 * m_; ++j) cost[j] = 1;
        build_objective(cost);
        run(/*forbid_artificials=*/false);
        if (obj_value() != 0) return false;
        // Pivot remaining artificials out of the basis (degenerate rows).
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < static_cast<int>(n_ + m_)) continue;
            bool pivoted = false;
            for (std::size_t j = 0; j < n_ + m_ && !pivoted; ++j) {
                if (rows_[i][j] != 0) {
                    pivot(i, j);
                    pivoted = true;
                }
            }
            if (!pivoted) redundant_rows_.push_back(i);  // all-zero row, harmless
        }
        return true;
    }

    /// Phase 2 over the structural objective. Returns false when unbounded.
    bool phase2(const std::vector<Rational>& structural_cost) {
        std::vector<Rational> cost(cols_ - 1, Rational(0));
        for (std::size_t j = 0; j < n_; ++j) cost[j] = structural_cost[j];
        build_objective(cost);
        return run(/*forbid_artificials=*/true);
    }

    Rational obj_value() const { return -obj_[cols_ - 1]; }

    std::vector<Rational> solution() const {
        std::vector<Rational> x(n_, Rational(0));
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] >= 0 && basis_[i] < static_cast<int>(n_))
                x[static_cast<std::size_t>(basis_[i])] = rows_[i][cols_ - 1];
        return x;
    }

private:
    void build_objective(const std::vector<Rational>& cost) {
        cost_ = cost;
        obj_.assign(cols_, Rational(0));
        for (std::size_t j = 0; j < cols_ - 1; ++j) obj_[j] = cost[j];
        // Price out the current basis.
        for (std::size_t i = 0; i < m_; ++i) {
            std::size_t b = static_cast<std::size_t>(basis_[i]);
            if (cost_[b] == 0) continue;
            Rational c = cost_[b];
            for (std::size_t j = 0; j < cols_; ++j) obj_[j] -= c * rows_[i][j];
        }
    }

    bool run(bool forbid_artificials) {
        const std::size_t limit = forbid_artificials ? n_ + m_ : n_ + 2 * m_;
        for (;;) {
            // Bland: entering = lowest-index column with negative reduced cost.
            std::size_t enter = cols_;
            for (std::size_t j = 0; j < limit; ++j)
                if (obj_[j] < 0) {
                    enter = j;
                    break;
                }
            if (enter == cols_) return true;  // optimal
            // Leaving: minimum ratio, ties by lowest basis index.
            std::size_t leave = m_;
            Rational best_ratio;
            for (std::size_t i = 0; i < m_; ++i) {
                if (rows_[i][enter] <= 0) continue;
                Rational ratio = rows_[i][cols_ - 1] / rows_[i][enter];
                if (leave == m_ || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == m_) return false;  // unbounded
            pivot(leave, enter);
        }
    }

    void pivot(std::size_t r, std::size_t c) {
        Rational p = rows_[r][c];
        assert(p != 0);
        for (auto& v : rows_[r]) v /= p;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r || rows_[i][c] == 0) continue;
            Rational f = rows_[i][c];
            for (std::size_t j = 0; j < cols_; ++j) rows_[i][j] -= f * rows_[r][j];
        }
        if (obj_[c] != 0) {
            Rational f = obj_[c];
            for (std::size_t j = 0; j < cols_; ++j) obj_[j] -= f * rows_[r][j];
        }
        basis_[r] = static_cast<int>(c);
    }

    std::size_t n_, m_, cols_;
    std::vector<std::vector<Rational>> rows_;
    std::vector<Rational> obj_;
    std::vector<Rational> cost_;
    std::vector<int> basis_;
    std::vector<std::size_t> redundant_rows_;
};

}  // namespace detail

/// Exact two-phase simplex. Statuses are outcomes, not errors.
inline LpSolution solve(const LpProblem& lp) {
    LpSolution sol;
    if (lp.num_vars() == 0) {
        sol.status = LpStatus::Optimal;
        sol.objective = 0;
        return sol;
    }
    detail::SimplexTableau tab(lp);
    if (!tab.phase1()) {
        sol.status = LpStatus::Infeasible;
        return sol;
    }
    if (!tab.phase2(lp.objective)) {
        sol.status = LpStatus::Unbounded;
        return sol;
    }
    sol.status = LpStatus::Optimal;
    sol.objective = tab.obj_value();
    sol.x = tab.solution();
    return sol;
}

/// Dual of (min c·x, Ax >= b, x >= 0): max b·y s.t. Aᵀy <= c, y >= 0,
/// restated in the same >=-form so the same solver applies.
inline LpProblem dual_of(const LpProblem& lp) {
    LpProblem dual;
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        dual.var_names.push_back("y" + std::to_string(i + 1));
        dual.objective.push_back(-lp.rows[i].rhs);
    }
    for (std::size_t j = 0; j < lp.num_vars(); ++j) {
        LpProblem::Row row;
        row.coeffs.reserve(lp.rows.size());
        for (const auto& r : lp.rows) row.coeffs.push_back(-r.coeffs[j]);
        row.rhs = -lp.objective[j];
        row.label = "dual:" + lp.var_names[j];
        dual.rows.push_back(std::move(row));
    }
    return dual;
}

/// Checks that an assignment satisfies every row exactly and reproduces the
/// claimed objective.
inline bool satisfies(const LpProblem& lp, const std::vector<Rational>& x) {
    if (x.size() != lp.num_vars()) return false;
    for (const auto& v : x)
        if (v < 0) return false;
    for (const auto& row : lp.rows) {
        Rational lhs = 0;
        for (std::size_t j = 0; j < x.size(); ++j) lhs += row.coeffs[j] * x[j];
        if (lhs < row.rhs) return false;
    }
    return true;
}

inline Rational objective_value(const LpProblem& lp, const std::vector<Rational>& x) {
    Rational v = 0;
    for (std::size_t j = 0; j < x.size(); ++j) v += lp.objective[j] * x[j];
    return v;
}

// ---------------------------------------------------------------------------
// Rate LPs
// ---------------------------------------------------------------------------

/// A rate LP together with the user behind each variable.
struct RateLp {
    LpProblem lp;
    std::vector<UserId> vars;     // one per structural variable except the epigraph var
    int epigraph_var = -1;        // index of t in lp (thm2 only)
};

namespace detail {

struct LpIndex {
    std::vector<UserId> users;            // K \ S̄, canonical order
    std::map<UserId, std::size_t> index;  // user -> variable
};

inline LpIndex outside_sbar_vars(const Instance& inst, const AuxReport& rep) {
    LpIndex ix;
    const UserSet outside = set_difference(inst.all_users(), rep.s_total);
    for (const auto& id : outside.members()) {
        ix.index[id] = ix.users.size();
        ix.users.push_back(id);
    }
    return ix;
}

inline std::optional<LpProblem::Row> covering_row(const Instance& inst, const LpIndex& ix,
                                                  const UserSet& view, const UserSet& protected_part,
                                                  std::size_t total_vars, const std::string& label) {
    // Lemma-2 side conditions: the coalition must not see everything and the
    // protected part must be nonempty, otherwise no covering bound exists.
    if (protected_part.empty()) return std::nullopt;
    UserSet complement = inst.complement(view);
    if (complement.empty()) return std::nullopt;
    LpProblem::Row row;
    row.coeffs.assign(total_vars, Rational(0));
    row.rhs = 1;
    row.label = label;
    for (const auto& id : complement.members()) {
        auto it = ix.index.find(id);
        if (it == ix.index.end())
            throw std::logic_error("covering row touches a full-rate user: " + to_string(id));
        row.coeffs[it->second] = 1;
    }
    return row;
}

}  // namespace detail

/// Theorem-2 program: minimize the largest colluder-side key mass, subject to
/// one covering constraint per |S̄|-attaining triple. The min–max objective is
/// realized through an epigraph variable t (one row per distinct T_n).
inline RateLp build_thm2_lp(const Instance& inst, const AuxReport& rep) {
    RateLp out;
    auto ix = detail::outside_sbar_vars(inst, rep);
    out.vars = ix.users;
    const std::size_t nb = ix.users.size();
    if (rep.a_full_triples.empty()) return out;  // empty program, b* = 0

    LpProblem& lp = out.lp;
    for (const auto& id : ix.users) lp.var_names.push_back("b" + to_string(id));
    lp.var_names.push_back("t");
    out.epigraph_var = static_cast<int>(nb);
    lp.objective.assign(nb + 1, Rational(0));
    lp.objective[nb] = 1;

    std::vector<int> epigraph_ns;
    for (const auto& tr : rep.a_full_triples) {
        UserSet s_in_u = set_intersection(inst.security_set(tr.m), inst.cluster(tr.u));
        UserSet view = set_union(s_in_u, inst.collusion_set(tr.n));
        std::string label = "cover A u=" + std::to_string(tr.u) + " m=" + std::to_string(tr.m) +
                            " n=" + std::to_string(tr.n);
        if (auto row = detail::covering_row(inst, ix, view, s_in_u, nb + 1, label))
            lp.rows.push_back(std::move(*row));
        if (std::find(epigraph_ns.begin(), epigraph_ns.end(), tr.n) == epigraph_ns.end())
            epigraph_ns.push_back(tr.n);
    }
    std::sort(epigraph_ns.begin(), epigraph_ns.end());
    for (int n : epigraph_ns) {
        LpProblem::Row row;
        row.coeffs.assign(nb + 1, Rational(0));
        row.coeffs[nb] = 1;
        const UserSet colluders_outside = set_difference(inst.collusion_set(n), rep.s_total);
        for (const auto& id : colluders_outside.members())
            row.coeffs[ix.index.at(id)] = -1;
        row.rhs = 0;
        row.label = "epi n=" + std::to_string(n);
        lp.rows.push_back(std::move(row));
    }
    return out;
}

/// Theorem-3 program: minimize the total key mass outside S̄, with covering
/// constraints of both kinds (per attaining triple and per attaining pair).
inline RateLp build_thm3_lp(const Instance& inst, const AuxReport& rep) {
    RateLp out;
    auto ix = detail::outside_sbar_vars(inst, rep);
    out.vars = ix.users;
    const std::size_t nb = ix.users.size();
    if (rep.a_full_triples.empty() && rep.e_full_pairs.empty()) return out;

    LpProblem& lp = out.lp;
    for (const auto& id : ix.users) lp.var_names.push_back("l" + to_string(id));
    lp.objective.assign(nb, Rational(1));

    for (const auto& tr : rep.a_full_triples) {
        UserSet s_in_u = set_intersection(inst.security_set(tr.m), inst.cluster(tr.u));
        UserSet view = set_union(s_in_u, inst.collusion_set(tr.n));
        std::string label = "cover A u=" + std::to_string(tr.u) + " m=" + std::to_string(tr.m) +
                            " n=" + std::to_string(tr.n);
        if (auto row = detail::covering_row(inst, ix, view, s_in_u, nb, label))
            lp.rows.push_back(std::move(*row));
    }
    for (const auto& pr : rep.e_full_pairs) {
        std::vector<int> relays = rep.relay_sets[pr.m - 1][pr.n - 1];
        UserSet relay_users = inst.clusters_of(relays);
        UserSet view = set_union(relay_users, inst.collusion_set(pr.n));
        std::string label = "cover E m=" + std::to_string(pr.m) + " n=" + std::to_string(pr.n);
        if (auto row = detail::covering_row(inst, ix, view, relay_users, nb, label))
            lp.rows.push_back(std::move(*row));
    }
    return out;
}

/// Solved fractional part of a rate: the optimum plus a canonical per-user
/// witness (for Theorem 2, the minimal-total assignment among optima).
struct FractionalRate {
    Rational optimum;                 // b* or l*
    std::map<UserId, Rational> assignment;
    RateLp primal;                    // the program that was solved (empty ⇒ optimum 0)
};

inline FractionalRate solve_thm2(const Instance& inst, const AuxReport& rep) {
    FractionalRate out;
    out.primal = build_thm2_lp(inst, rep);
    out.optimum = 0;
    for (const auto& id : out.primal.vars) out.assignment[id] = 0;
    if (out.primal.lp.num_vars() == 0) return out;

    LpSolution minimax = solve(out.primal.lp);
    if (minimax.status != LpStatus::Optimal)
        throw std::logic_error("thm2 LP not optimal: " + to_string(minimax.status));
    out.optimum = minimax.objective;

    // Second stage: among max-optimal points, take the minimal total mass so
    // the synthesized key budget is as small as possible.
    LpProblem stage2 = out.primal.lp;
    const std::size_t nb = out.primal.vars.size();
    stage2.objective.assign(nb + 1, Rational(1));
    stage2.objective[nb] = 0;
    LpProblem::Row cap;
    cap.coeffs.assign(nb + 1, Rational(0));
    cap.coeffs[nb] = -1;
    cap.rhs = -out.optimum;
    cap.label = "t <= b*";
    stage2.rows.push_back(std::move(cap));
    LpSolution refined = solve(stage2);
    if (refined.status != LpStatus::Optimal)
        throw std::logic_error("thm2 refinement LP not optimal");
    for (std::size_t j = 0; j < nb; ++j) out.assignment[out.primal.vars[j]] = refined.x[j];
    return out;
}

inline FractionalRate solve_thm3(const Instance& inst, const AuxReport& rep) {
    FractionalRate out;
    out.primal = build_thm3_lp(inst, rep);
    out.optimum = 0;
    for (const auto& id : out.primal.vars) out.assignment[id] = 0;
    if (out.primal.lp.num_vars() == 0 || out.primal.lp.rows.empty()) return out;
    LpSolution sol = solve(out.primal.lp);
    if (sol.status != LpStatus::Optimal)
        throw std::logic_error("thm3 LP not optimal: " + to_string(sol.status));
    out.optimum = sol.objective;
    for (std::size_t j = 0; j < out.primal.vars.size(); ++j)
        out.assignment[out.primal.vars[j]] = sol.x[j];
    return out;
}

}  // namespace wshsa
