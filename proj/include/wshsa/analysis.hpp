#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "wshsa/model.hpp"

namespace wshsa {

/// One (u, m, n) triple whose A-set attains the a* maximum.
struct ATriple {
    int u = 0;
    int m = 0;
    int n = 0;
    auto operator<=>(const ATriple&) const = default;
};

struct PairMN {
    int m = 0;
    int n = 0;
    auto operator<=>(const PairMN&) const = default;
};

enum class Condition { Infeasible, C1Case2, C1Case3, C1Case4, C2, C3 };

inline std::string to_string(Condition c) {
    switch (c) {
        case Condition::Infeasible: return "Infeasible";
        case Condition::C1Case2: return "C1Case2";
        case Condition::C1Case3: return "C1Case3";
        case Condition::C1Case4: return "C1Case4";
        case Condition::C2: return "C2";
        case Condition::C3: return "C3";
    }
    return "?";
}

/// Every derived set quantity of an instance. Maxima and argmax lists range
/// over pairs with S_m ∩ T_n = ∅ only: the converse inequalities behind them
/// assume disjointness, and with monotone families the disjoint sub-pair
/// (S_m∖T_n, T_n) always realizes the same A/E sets.
struct AuxReport {
    // Indexed [m-1][n-1].
    std::vector<std::vector<std::vector<int>>> relay_sets;
    std::vector<std::vector<bool>> coverage_full;  // |K_{U^(m,n)} ∪ T_n| = K
    std::vector<std::vector<bool>> eligible;       // S_m ∩ T_n = ∅

    UserSet s_implicit_relay;   // S_I1
    UserSet s_implicit_server;  // S_I2
    UserSet s_implicit;         // S_I
    UserSet s_total;            // S̄

    int a_star = 0;
    int e_star = 0;  // literal Definition-3 value, max |E_{m,n}|
    int d_star = 0;  // max |U^(m,n)| + |T_n ∩ S̄|
    int d_adj = 0;   // same maximum with 1 subtracted for fully covered pairs

    std::vector<ATriple> a_argmax;                  // |A_{u,m,n}| = a*
    std::vector<PairMN> e_argmax;                   // |E_{m,n}| = e*
    std::vector<PairMN> d_argmax;                   // attain d_star
    std::vector<ATriple> a_full_triples;            // |A_{u,m,n}| = |S̄|
    std::vector<PairMN> e_full_pairs;               // |E_{m,n}| = |S̄|
    std::vector<PairMN> e_full_nonredundant_pairs;  // see classify()

    UserSet q1, q2, q3, q;

    bool all_d_argmax_covered = false;
};

inline UserSet security_relay_set_users(const Instance& inst, int m, int n,
                                        std::vector<int>* relays_out = nullptr) {
    std::vector<int> relays;
    const UserSet& s = inst.security_set(m);
    const UserSet& t = inst.collusion_set(n);
    UserSet st = set_union(s, t);
    for (int u = 1; u <= inst.num_clusters(); ++u) {
        UserSet ku = inst.cluster(u);
        bool touches = !set_intersection(s, ku).empty();
        bool covered = static_cast<int>(set_intersection(st, ku).size()) == inst.cluster_size(u);
        if (touches && covered) relays.push_back(u);
    }
    UserSet users = inst.clusters_of(relays);
    if (relays_out) *relays_out = std::move(relays);
    return users;
}

/// Relay u belongs to U^(m,n) iff S_m touches its cluster and S_m ∪ T_n
/// covers the cluster entirely.
inline std::vector<int> security_relay_set(const Instance& inst, int m, int n) {
    std::vector<int> relays;
    security_relay_set_users(inst, m, n, &relays);
    return relays;
}

struct TotalSecurity {
    UserSet s_i1, s_i2, s_i, s_bar;
};

/// S_I1, S_I2, S_I and S̄ per Definition 2: users forced to hold full-sized
/// keys because some coalition view covers all but one user.
inline TotalSecurity total_security_set(const Instance& inst) {
    const int K = inst.num_users();
    UserSet explicit_union;
    for (const auto& s : inst.security_sets()) explicit_union = set_union(explicit_union, s);

    UserSet i1, i2;
    for (int m = 1; m <= inst.num_security_sets(); ++m) {
        for (int n = 1; n <= inst.num_collusion_sets(); ++n) {
            const UserSet& t = inst.collusion_set(n);
            for (int u = 1; u <= inst.num_clusters(); ++u) {
                UserSet view = set_union(set_intersection(inst.security_set(m), inst.cluster(u)), t);
                if (static_cast<int>(view.size()) == K - 1)
                    i1 = set_union(i1, inst.complement(view));
            }
            UserSet relay_view = set_union(security_relay_set_users(inst, m, n), t);
            if (static_cast<int>(relay_view.size()) == K - 1)
                i2 = set_union(i2, inst.complement(relay_view));
        }
    }
    TotalSecurity out;
    out.s_i1 = set_difference(i1, explicit_union);
    out.s_i2 = set_difference(i2, explicit_union);
    out.s_i = set_union(out.s_i1, out.s_i2);
    out.s_bar = set_union(explicit_union, out.s_i);
    return out;
}

inline AuxReport quantities(const Instance& inst) {
    const int M = inst.num_security_sets();
    const int N = inst.num_collusion_sets();
    const int U = inst.num_clusters();
    const int K = inst.num_users();

    AuxReport rep;
    auto totals = total_security_set(inst);
    rep.s_implicit_relay = totals.s_i1;
    rep.s_implicit_server = totals.s_i2;
    rep.s_implicit = totals.s_i;
    rep.s_total = totals.s_bar;
    const UserSet& sbar = rep.s_total;
    const int sbar_size = static_cast<int>(sbar.size());

    rep.relay_sets.assign(M, std::vector<std::vector<int>>(N));
    rep.coverage_full.assign(M, std::vector<bool>(N, false));
    rep.eligible.assign(M, std::vector<bool>(N, false));

    struct PairData {
        int d_value = 0;
        bool covered = false;
        UserSet e_set;
        UserSet relay_view;  // K_{U^(m,n)} ∪ T_n
        bool relay_nonempty = false;
    };
    std::vector<std::vector<PairData>> pairs(M, std::vector<PairData>(N));

    for (int m = 1; m <= M; ++m) {
        const UserSet& s = inst.security_set(m);
        for (int n = 1; n <= N; ++n) {
            const UserSet& t = inst.collusion_set(n);
            std::vector<int> relays;
            UserSet relay_users = security_relay_set_users(inst, m, n, &relays);
            rep.relay_sets[m - 1][n - 1] = relays;
            PairData& pd = pairs[m - 1][n - 1];
            pd.relay_view = set_union(relay_users, t);
            pd.covered = static_cast<int>(pd.relay_view.size()) == K;
            pd.relay_nonempty = !relays.empty();
            pd.e_set = set_intersection(pd.relay_view, sbar);
            pd.d_value = static_cast<int>(relays.size()) +
                         static_cast<int>(set_intersection(t, sbar).size());
            rep.coverage_full[m - 1][n - 1] = pd.covered;
            rep.eligible[m - 1][n - 1] = set_intersection(s, t).empty();
        }
    }

    // a*: every (u, m, n) over eligible pairs.
    struct FullA {
        ATriple triple;
        UserSet view;  // (S_m ∩ K_u) ∪ T_n
        bool protects = false;
    };
    std::vector<FullA> full_a;
    for (int m = 1; m <= M; ++m) {
        for (int n = 1; n <= N; ++n) {
            if (!rep.eligible[m - 1][n - 1]) continue;
            const UserSet& t = inst.collusion_set(n);
            for (int u = 1; u <= U; ++u) {
                UserSet s_in_u = set_intersection(inst.security_set(m), inst.cluster(u));
                UserSet view = set_union(s_in_u, t);
                int a = static_cast<int>(set_intersection(view, sbar).size());
                if (a > rep.a_star) {
                    rep.a_star = a;
                    rep.a_argmax.clear();
                }
                if (a == rep.a_star) rep.a_argmax.push_back({u, m, n});
                if (a == sbar_size)
                    full_a.push_back({{u, m, n}, view, !s_in_u.empty()});
            }
        }
    }
    for (const auto& fa : full_a) rep.a_full_triples.push_back(fa.triple);

    for (int m = 1; m <= M; ++m) {
        for (int n = 1; n <= N; ++n) {
            if (!rep.eligible[m - 1][n - 1]) continue;
            const PairData& pd = pairs[m - 1][n - 1];
            int e = static_cast<int>(pd.e_set.size());
            if (e > rep.e_star) {
                rep.e_star = e;
                rep.e_argmax.clear();
            }
            if (e == rep.e_star) rep.e_argmax.push_back({m, n});
            if (e == sbar_size) rep.e_full_pairs.push_back({m, n});

            if (pd.d_value > rep.d_star) {
                rep.d_star = pd.d_value;
                rep.d_argmax.clear();
            }
            if (pd.d_value == rep.d_star) rep.d_argmax.push_back({m, n});
            rep.d_adj = std::max(rep.d_adj, pd.d_value - (pd.covered ? 1 : 0));
        }
    }

    // An E-attainment is redundant when its observed user set coincides with
    // an A-attaining view: its converse inequality and LP row then duplicate
    // the A-type ones.
    for (const auto& pr : rep.e_full_pairs) {
        const PairData& pd = pairs[pr.m - 1][pr.n - 1];
        bool redundant = false;
        for (const auto& fa : full_a)
            if (fa.view == pd.relay_view) {
                redundant = true;
                break;
            }
        if (!redundant) rep.e_full_nonredundant_pairs.push_back(pr);
    }

    rep.all_d_argmax_covered = !rep.d_argmax.empty();
    for (const auto& pr : rep.d_argmax)
        if (!pairs[pr.m - 1][pr.n - 1].covered) rep.all_d_argmax_covered = false;

    // Q sets (Definition 5).
    for (const auto& fa : full_a) rep.q1 = set_union(rep.q1, fa.view);
    for (const auto& pr : rep.e_full_pairs)
        rep.q2 = set_union(rep.q2, pairs[pr.m - 1][pr.n - 1].relay_view);
    const int q3_threshold = std::max(rep.a_star, rep.d_star);
    for (int m = 1; m <= M; ++m)
        for (int n = 1; n <= N; ++n)
            if (rep.eligible[m - 1][n - 1] && pairs[m - 1][n - 1].d_value == q3_threshold)
                rep.q3 = set_union(rep.q3, pairs[m - 1][n - 1].relay_view);
    rep.q = set_union(set_union(rep.q1, rep.q2), rep.q3);
    return rep;
}

/// Disjoint-condition classifier. Precedence mirrors the condition list:
/// infeasibility, then the full-coverage case, then the |S̄| attainment split.
inline Condition classify(const AuxReport& rep, const Instance& inst) {
    const int K = inst.num_users();
    const int sbar = static_cast<int>(rep.s_total.size());
    if (rep.a_star == K) return Condition::Infeasible;
    if (rep.all_d_argmax_covered) return Condition::C1Case2;
    if (std::max(rep.a_star, rep.e_star) <= sbar - 1) return Condition::C1Case3;
    // max{a*, e*} = |S̄| from here on.
    if (static_cast<int>(rep.q.size()) <= K - 1) return Condition::C1Case4;
    if (rep.a_star == sbar && rep.e_full_nonredundant_pairs.empty()) return Condition::C2;
    return Condition::C3;
}

inline Condition classify(const Instance& inst) { return classify(quantities(inst), inst); }

}  // namespace wshsa
