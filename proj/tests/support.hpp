#pragma once

// Shared fixtures and independent brute-force oracles. Everything here stays
// structurally separate from the library's computation paths: plain
// std::set-based set algebra, direct definition transcriptions.

#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wshsa/analysis.hpp"
#include "wshsa/model.hpp"

namespace testsupport {

using wshsa::Instance;
using wshsa::UserId;
using wshsa::UserSet;

inline std::string instance_path(const std::string& name) {
    return std::string(WSHSA_INSTANCE_DIR) + "/" + name;
}

inline Instance example1() { return Instance::from_file(instance_path("example1.json")); }
inline Instance example2() { return Instance::from_file(instance_path("example2.json")); }
inline Instance strong_security() {
    return Instance::from_file(instance_path("strong_security.json"));
}
inline Instance infeasible_pair() {
    return Instance::from_file(instance_path("infeasible_pair.json"));
}
inline Instance empty_families() {
    return Instance::from_file(instance_path("empty_families.json"));
}

// ---------------------------------------------------------------------------
// Brute-force oracle: definition-level recomputation on std::set.
// ---------------------------------------------------------------------------

using RawSet = std::set<std::pair<int, int>>;

inline RawSet raw(const UserSet& s) {
    RawSet out;
    for (const auto& id : s.members()) out.insert({id.u, id.v});
    return out;
}

inline RawSet raw_union(const RawSet& a, const RawSet& b) {
    RawSet out = a;
    out.insert(b.begin(), b.end());
    return out;
}

inline RawSet raw_intersect(const RawSet& a, const RawSet& b) {
    RawSet out;
    for (const auto& x : a)
        if (b.count(x)) out.insert(x);
    return out;
}

inline RawSet raw_minus(const RawSet& a, const RawSet& b) {
    RawSet out;
    for (const auto& x : a)
        if (!b.count(x)) out.insert(x);
    return out;
}

struct BruteQuantities {
    RawSet sbar;
    int a_star = 0;
    int e_star = 0;
    int d_star = 0;
};

inline RawSet brute_cluster(const Instance& inst, int u) {
    RawSet out;
    for (int v = 1; v <= inst.cluster_size(u); ++v) out.insert({u, v});
    return out;
}

inline RawSet brute_all(const Instance& inst) {
    RawSet out;
    for (int u = 1; u <= inst.num_clusters(); ++u)
        for (int v = 1; v <= inst.cluster_size(u); ++v) out.insert({u, v});
    return out;
}

inline std::vector<int> brute_relay_set(const Instance& inst, const RawSet& s, const RawSet& t) {
    std::vector<int> relays;
    for (int u = 1; u <= inst.num_clusters(); ++u) {
        RawSet ku = brute_cluster(inst, u);
        if (raw_intersect(s, ku).empty()) continue;
        if (raw_intersect(raw_union(s, t), ku).size() == ku.size()) relays.push_back(u);
    }
    return relays;
}

/// Transcribes the auxiliary definitions directly, with no shared code with
/// the library: S_I via the K-1 coverage unions, the three maxima over
/// disjoint (S_m, T_n) pairs.
inline BruteQuantities brute_quantities(const Instance& inst) {
    const int K = inst.num_users();
    const RawSet all = brute_all(inst);
    RawSet explicit_union;
    std::vector<RawSet> S, T;
    for (const auto& s : inst.security_sets()) S.push_back(raw(s));
    for (const auto& t : inst.collusion_sets()) T.push_back(raw(t));
    for (const auto& s : S) explicit_union = raw_union(explicit_union, s);

    RawSet implicit;
    for (const auto& s : S) {
        for (const auto& t : T) {
            for (int u = 1; u <= inst.num_clusters(); ++u) {
                RawSet view = raw_union(raw_intersect(s, brute_cluster(inst, u)), t);
                if ((int)view.size() == K - 1)
                    implicit = raw_union(implicit, raw_minus(all, view));
            }
            RawSet ku;
            for (int u : brute_relay_set(inst, s, t)) ku = raw_union(ku, brute_cluster(inst, u));
            RawSet view = raw_union(ku, t);
            if ((int)view.size() == K - 1) implicit = raw_union(implicit, raw_minus(all, view));
        }
    }
    BruteQuantities out;
    out.sbar = raw_union(explicit_union, raw_minus(implicit, explicit_union));

    for (const auto& s : S) {
        for (const auto& t : T) {
            if (!raw_intersect(s, t).empty()) continue;
            for (int u = 1; u <= inst.num_clusters(); ++u) {
                RawSet a = raw_intersect(raw_union(raw_intersect(s, brute_cluster(inst, u)), t), out.sbar);
                out.a_star = std::max(out.a_star, (int)a.size());
            }
            auto relays = brute_relay_set(inst, s, t);
            RawSet ku;
            for (int u : relays) ku = raw_union(ku, brute_cluster(inst, u));
            RawSet e = raw_intersect(raw_union(ku, t), out.sbar);
            out.e_star = std::max(out.e_star, (int)e.size());
            out.d_star = std::max(out.d_star,
                                  (int)relays.size() + (int)raw_intersect(t, out.sbar).size());
        }
    }
    return out;
}

/// Brute-force downward closure over the whole powerset of users.
inline std::vector<UserSet> brute_closure(const Instance& inst,
                                          const std::vector<UserSet>& family) {
    std::vector<UserId> all;
    for (int u = 1; u <= inst.num_clusters(); ++u)
        for (int v = 1; v <= inst.cluster_size(u); ++v) all.push_back({u, v});
    std::vector<UserSet> out;
    for (std::uint32_t mask = 0; mask < (1u << all.size()); ++mask) {
        std::vector<UserId> sub;
        for (std::size_t i = 0; i < all.size(); ++i)
            if (mask & (1u << i)) sub.push_back(all[i]);
        UserSet candidate(sub);
        for (const auto& member : family)
            if (candidate.subset_of(member)) {
                out.push_back(candidate);
                break;
            }
    }
    std::sort(out.begin(), out.end(), [](const UserSet& a, const UserSet& b) {
        return canonical_less(a, b);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Random instances
// ---------------------------------------------------------------------------

inline UserSet random_subset(std::mt19937_64& rng, const std::vector<UserId>& users,
                             int max_size) {
    std::uniform_int_distribution<int> size_dist(0, max_size);
    int size = size_dist(rng);
    std::vector<UserId> pool = users;
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(std::min<std::size_t>(pool.size(), static_cast<std::size_t>(size)));
    return UserSet(pool);
}

/// Small random instances, biased so that whole-cluster security sets (the
/// shape that produces fractional rates) appear regularly.
inline Instance random_instance(std::mt19937_64& rng, int max_clusters = 3, int max_users = 6) {
    std::uniform_int_distribution<int> u_dist(2, max_clusters);
    int U = u_dist(rng);
    std::vector<int> sizes;
    int total = 0;
    for (int u = 0; u < U; ++u) {
        int remaining = max_users - total - (U - u - 1);
        std::uniform_int_distribution<int> v_dist(1, std::max(1, std::min(3, remaining)));
        int v = v_dist(rng);
        sizes.push_back(v);
        total += v;
    }
    std::vector<UserId> users;
    for (int u = 1; u <= U; ++u)
        for (int v = 1; v <= sizes[static_cast<std::size_t>(u - 1)]; ++v) users.push_back({u, v});

    std::vector<UserSet> security, collusion;
    std::uniform_int_distribution<int> coin(0, 3);
    if (coin(rng) != 0) {
        // Whole-cluster protection.
        std::uniform_int_distribution<int> cdist(1, U);
        int cu = cdist(rng);
        std::vector<UserId> cluster;
        for (int v = 1; v <= sizes[static_cast<std::size_t>(cu - 1)]; ++v) cluster.push_back({cu, v});
        security.emplace_back(cluster);
    }
    std::uniform_int_distribution<int> extra(0, 2);
    for (int i = extra(rng); i > 0; --i) security.push_back(random_subset(rng, users, 3));
    if (security.empty()) security.emplace_back();
    for (int i = extra(rng) + 1; i > 0; --i) collusion.push_back(random_subset(rng, users, 3));
    return Instance(sizes, security, collusion, /*auto_close=*/true);
}

}  // namespace testsupport
