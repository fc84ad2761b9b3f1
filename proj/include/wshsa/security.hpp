#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wshsa/analysis.hpp"
#include "wshsa/gf.hpp"
#include "wshsa/model.hpp"
#include "wshsa/scheme.hpp"

namespace wshsa {

/// Rows expressing observed symbols as linear combinations of the global
/// source vector: K·L input symbols followed by Lz key symbols.
using Observable = Mat;

/// H(obs) in symbols (units of log q): for uniform independent sources the
/// entropy of a linear view is exactly its rank.
inline long long rank_entropy(const Observable& obs) {
    return static_cast<long long>(rank(obs));
}

/// Per-scheme observable builder.
class ObservableSpace {
public:
    ObservableSpace(const Instance& inst, const LinearScheme& s) : inst_(inst), s_(s) {
        if (inst.cluster_sizes() != s.clusters)
            throw std::invalid_argument("scheme topology does not match instance");
        cols_ = static_cast<std::size_t>(s.num_users() * s.L + s.Lz);
    }

    std::size_t cols() const { return cols_; }
    std::uint64_t q() const { return s_.q; }

    Observable empty() const { return Mat(s_.q, 0, cols_); }

    Observable input_rows(UserId id) const {
        Mat m(s_.q, static_cast<std::size_t>(s_.L), cols_);
        std::size_t off = static_cast<std::size_t>(inst_.user_index(id) * s_.L);
        for (int r = 0; r < s_.L; ++r) m.at(static_cast<std::size_t>(r), off + static_cast<std::size_t>(r)) = 1;
        return m;
    }

    Observable key_rows(UserId id) const {
        Mat m(s_.q, static_cast<std::size_t>(s_.L), cols_);
        const Mat& g = s_.key_map(id);
        std::size_t key_off = static_cast<std::size_t>(s_.num_users() * s_.L);
        for (std::size_t r = 0; r < g.rows; ++r)
            for (std::size_t c = 0; c < g.cols; ++c) m.at(r, key_off + c) = g.at(r, c);
        return m;
    }

    Observable message_rows(UserId id) const { return input_rows(id) + key_rows(id); }

    Observable relay_rows(int u) const {
        Mat m(s_.q, static_cast<std::size_t>(s_.L), cols_);
        for (int v = 1; v <= inst_.cluster_size(u); ++v) m = m + message_rows({u, v});
        return m;
    }

    Observable all_relay_rows() const {
        std::vector<Mat> parts;
        for (int u = 1; u <= inst_.num_clusters(); ++u) parts.push_back(relay_rows(u));
        return vstack(parts, s_.q, cols_);
    }

    Observable input_sum_rows() const {
        Mat m(s_.q, static_cast<std::size_t>(s_.L), cols_);
        for (const auto& id : inst_.user_list()) m = m + input_rows(id);
        return m;
    }

    Observable inputs_of(const UserSet& set) const {
        std::vector<Mat> parts;
        for (const auto& id : set.members()) parts.push_back(input_rows(id));
        return vstack(parts, s_.q, cols_);
    }

    Observable keys_of(const UserSet& set) const {
        std::vector<Mat> parts;
        for (const auto& id : set.members()) parts.push_back(key_rows(id));
        return vstack(parts, s_.q, cols_);
    }

    Observable inputs_and_keys_of(const UserSet& set) const {
        return stack({inputs_of(set), keys_of(set)});
    }

    Observable messages_of_cluster(int u) const {
        std::vector<Mat> parts;
        for (int v = 1; v <= inst_.cluster_size(u); ++v) parts.push_back(message_rows({u, v}));
        return vstack(parts, s_.q, cols_);
    }

    Observable stack(const std::vector<Mat>& parts) const { return vstack(parts, s_.q, cols_); }

private:
    const Instance& inst_;
    const LinearScheme& s_;
    std::size_t cols_;
};

/// I(A;B|C) = rk[A;C] + rk[B;C] − rk[A;B;C] − rk[C], in symbols. Exact for
/// jointly linear views of a uniform source; nonnegative by submodularity.
inline long long conditional_mi(const Observable& a, const Observable& b, const Observable& c) {
    if (a.cols != b.cols || b.cols != c.cols)
        throw std::invalid_argument("conditional_mi: column counts differ");
    std::vector<Mat> ac{a, c}, bc{b, c}, abc{a, b, c}, cc{c};
    long long r_ac = rank_entropy(vstack(ac, a.q, a.cols));
    long long r_bc = rank_entropy(vstack(bc, a.q, a.cols));
    long long r_abc = rank_entropy(vstack(abc, a.q, a.cols));
    long long r_c = rank_entropy(vstack(cc, a.q, a.cols));
    return r_ac + r_bc - r_abc - r_c;
}

/// Shannon CMI measured on the exact joint histogram over every source
/// realization. Independent of the rank path: pure counting.
/// Returns nullopt when q^(columns) exceeds the enumeration budget, and
/// throws if the histogram is not exactly representable in symbol units
/// (impossible for linear observables).
inline std::optional<long long> exhaustive_mi(const Observable& a, const Observable& b,
                                              const Observable& c, std::uint64_t budget) {
    const std::uint64_t q = a.q;
    const std::size_t cols = a.cols;
    long double states_ld = 1;
    for (std::size_t i = 0; i < cols; ++i) {
        states_ld *= static_cast<long double>(q);
        if (states_ld > static_cast<long double>(budget)) return std::nullopt;
    }
    const std::uint64_t states = [&] {
        std::uint64_t s = 1;
        for (std::size_t i = 0; i < cols; ++i) s *= q;
        return s;
    }();

    Fp f(q);
    const Mat joint = vstack({a, b, c}, q, cols);
    const std::size_t na = a.rows, nb = b.rows, nc = c.rows;

    std::map<std::vector<std::uint64_t>, std::uint64_t> hist_c, hist_ac, hist_bc, hist_abc;
    std::vector<std::uint64_t> x(cols, 0), vals(joint.rows, 0);
    std::vector<std::uint64_t> key;
    for (std::uint64_t it = 0;; ++it) {
        for (std::size_t r = 0; r < joint.rows; ++r) {
            std::uint64_t acc = 0;
            for (std::size_t cc = 0; cc < cols; ++cc) {
                std::uint64_t coef = joint.at(r, cc);
                if (coef) acc = f.add(acc, f.mul(coef, x[cc]));
            }
            vals[r] = acc;
        }
        auto va = vals.begin();
        auto vb = vals.begin() + static_cast<std::ptrdiff_t>(na);
        auto vc = vals.begin() + static_cast<std::ptrdiff_t>(na + nb);
        key.assign(vc, vals.end());
        ++hist_c[key];
        key.assign(va, vb);
        key.insert(key.end(), vc, vals.end());
        ++hist_ac[key];
        key.assign(vb, vc);
        key.insert(key.end(), vc, vals.end());
        ++hist_bc[key];
        ++hist_abc[vals];
        (void)nc;

        std::size_t pos = 0;
        while (pos < cols && ++x[pos] == q) x[pos++] = 0;
        if (pos == cols) break;
        if (it >= states) throw std::logic_error("enumeration overran the state count");
    }

    auto entropy_symbols = [&](const std::map<std::vector<std::uint64_t>, std::uint64_t>& hist) {
        std::uint64_t first = hist.begin()->second;
        for (const auto& [k, v] : hist)
            if (v != first)
                throw std::logic_error("non-uniform histogram: entropy not an exact symbol count");
        std::uint64_t values = states / first;
        if (values * first != states) throw std::logic_error("histogram does not partition states");
        long long e = 0;
        while (values > 1) {
            if (values % q != 0)
                throw std::logic_error("value count is not a power of the field size");
            values /= q;
            ++e;
        }
        return e;
    };

    return entropy_symbols(hist_ac) + entropy_symbols(hist_bc) - entropy_symbols(hist_abc) -
           entropy_symbols(hist_c);
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

struct RelayCheck {
    int u = 0, m = 0, n = 0;
    long long cmi = 0;
};

struct ServerCheck {
    int m = 0, n = 0;
    long long cmi = 0;
};

struct SecurityReport {
    std::vector<RelayCheck> relay_checks;
    std::vector<ServerCheck> server_checks;
    int skipped_pairs = 0;  // S_m ⊆ T_n: trivially zero CMI
    bool correctness = false;
    bool all_pass = false;

    bool oracle_ran = false;
    int oracle_checks = 0;
    int oracle_mismatches = 0;

    long long max_cmi() const {
        long long m = 0;
        for (const auto& c : relay_checks) m = std::max(m, c.cmi);
        for (const auto& c : server_checks) m = std::max(m, c.cmi);
        return m;
    }
};

/// Evaluates every server and relay security constraint exactly, checks the
/// correctness identity symbolically, and (within budget) cross-checks each
/// CMI against the exhaustive histogram oracle. Violations are report
/// content, not errors.
inline SecurityReport verify(const Instance& inst, const LinearScheme& s,
                             std::uint64_t oracle_budget = 0) {
    ObservableSpace obs(inst, s);
    SecurityReport rep;

    // Correctness: the sum of relay messages minus the input sum must be the
    // zero map, i.e. keys cancel.
    rep.correctness = (s.key_map_sum().is_zero());

    // The budget caps the total number of enumerated joint states across the
    // whole constraint grid, so verification time stays bounded.
    bool states_within_budget = false;
    if (oracle_budget > 0) {
        long double total = 1;
        states_within_budget = true;
        for (std::size_t i = 0; i < obs.cols(); ++i) {
            total *= static_cast<long double>(s.q);
            if (total > static_cast<long double>(oracle_budget)) {
                states_within_budget = false;
                break;
            }
        }
        if (states_within_budget) {
            long double n_checks = 0;
            for (int m = 1; m <= inst.num_security_sets(); ++m)
                for (int n = 1; n <= inst.num_collusion_sets(); ++n)
                    if (!inst.security_set(m).subset_of(inst.collusion_set(n)))
                        n_checks += inst.num_clusters() + 1;
            if (total * n_checks > static_cast<long double>(oracle_budget))
                states_within_budget = false;
        }
    }

    auto cross_check = [&](const Observable& a, const Observable& b, const Observable& c,
                           long long rank_value) {
        if (!states_within_budget) return;
        auto oracle = exhaustive_mi(a, b, c, oracle_budget);
        if (!oracle) return;
        rep.oracle_ran = true;
        ++rep.oracle_checks;
        if (*oracle != rank_value) ++rep.oracle_mismatches;
    };

    Observable all_relays = obs.all_relay_rows();
    Observable sum_w = obs.input_sum_rows();

    for (int m = 1; m <= inst.num_security_sets(); ++m) {
        const UserSet& sm = inst.security_set(m);
        for (int n = 1; n <= inst.num_collusion_sets(); ++n) {
            const UserSet& tn = inst.collusion_set(n);
            if (sm.subset_of(tn)) {
                ++rep.skipped_pairs;
                continue;
            }
            Observable b = obs.inputs_of(sm);
            Observable colluder_view = obs.inputs_and_keys_of(tn);
            // Relay security: relay u's received messages vs the protected
            // inputs, given the colluders' inputs and keys.
            for (int u = 1; u <= inst.num_clusters(); ++u) {
                Observable a = obs.messages_of_cluster(u);
                long long v = conditional_mi(a, b, colluder_view);
                rep.relay_checks.push_back({u, m, n, v});
                cross_check(a, b, colluder_view, v);
            }
            // Server security: relay messages vs protected inputs, given the
            // input sum and the colluders' data.
            Observable c = obs.stack({sum_w, colluder_view});
            long long v = conditional_mi(all_relays, b, c);
            rep.server_checks.push_back({m, n, v});
            cross_check(all_relays, b, c, v);
        }
    }

    rep.all_pass = rep.correctness && rep.max_cmi() == 0 && rep.oracle_mismatches == 0;
    return rep;
}

// ---------------------------------------------------------------------------
// Converse lemma audit
// ---------------------------------------------------------------------------

struct LemmaCheck {
    std::string rule;
    std::string where;
    long long lhs = 0;
    long long bound = 0;
    long long slack() const { return lhs - bound; }
    bool ok() const { return lhs >= bound; }
};

struct LemmaAudit {
    std::vector<LemmaCheck> checks;
    bool all_hold = true;

    void add(LemmaCheck c) {
        all_hold = all_hold && c.ok();
        checks.push_back(std::move(c));
    }
};

/// Evaluates the appendix inequalities (transmission-size and key-entropy
/// lower bounds) on a concrete scheme via rank entropies. They hold for any
/// scheme satisfying correctness and security, so a failure on a verified
/// scheme flags an implementation bug.
inline LemmaAudit audit_lemmas(const Instance& inst, const LinearScheme& s, const AuxReport& rep) {
    ObservableSpace obs(inst, s);
    LemmaAudit audit;
    const int K = inst.num_users();
    const long long L = s.L;
    const UserSet all = inst.all_users();

    auto cond_entropy = [&](const Observable& what, const Observable& given) {
        std::vector<Mat> joint{what, given}, base{given};
        return rank_entropy(obs.stack(joint)) - rank_entropy(obs.stack(base));
    };

    // Transmission size: each X_{u,v} and Y_u carries a full input's worth of
    // fresh symbols even when everything else is known.
    for (const auto& id : all.members()) {
        UserSet rest = set_difference(all, UserSet{id});
        Observable others = obs.inputs_and_keys_of(rest);
        audit.add({"lemma1.X", "user " + to_string(id),
                   cond_entropy(obs.message_rows(id), others), L});
        audit.add({"lemma1.Y", "relay " + std::to_string(id.u) + " missing " + to_string(id),
                   cond_entropy(obs.relay_rows(id.u), others), L});
    }

    for (int m = 1; m <= inst.num_security_sets(); ++m) {
        const UserSet& sm = inst.security_set(m);
        for (int n = 1; n <= inst.num_collusion_sets(); ++n) {
            const UserSet& tn = inst.collusion_set(n);
            if (!set_intersection(sm, tn).empty()) continue;
            Observable z_t = obs.keys_of(tn);
            std::string mn = "m=" + std::to_string(m) + " n=" + std::to_string(n);

            const std::vector<int>& relays = rep.relay_sets[m - 1][n - 1];
            UserSet k_relays = inst.clusters_of(relays);
            UserSet relay_view = set_union(k_relays, tn);
            bool covered = static_cast<int>(relay_view.size()) == K;

            for (int u = 1; u <= inst.num_clusters(); ++u) {
                UserSet s_in_u = set_intersection(sm, inst.cluster(u));
                UserSet view = set_union(s_in_u, tn);
                std::string umn = "u=" + std::to_string(u) + " " + mn;
                if (!s_in_u.empty() && static_cast<int>(view.size()) <= K - 1) {
                    audit.add({"lemma2.X", umn,
                               cond_entropy(obs.keys_of(inst.complement(view)), z_t), L});
                    audit.add({"lemma3.X", umn, cond_entropy(obs.keys_of(s_in_u), z_t),
                               static_cast<long long>(s_in_u.size()) * L});
                    if (static_cast<int>(view.size()) == K - 1) {
                        UserSet missing = inst.complement(view);
                        audit.add({"corollary1", umn + " user " + to_string(missing.members()[0]),
                                   cond_entropy(obs.keys_of(missing), z_t), L});
                    }
                }
                // lemma4.X needs the full coalition to miss at least one user.
                if (!s_in_u.empty() &&
                    static_cast<int>(set_union(sm, tn).size()) <= K - 1) {
                    UserSet a_set = set_intersection(view, rep.s_total);
                    audit.add({"lemma4.X", umn,
                               cond_entropy(obs.keys_of(a_set),
                                            obs.keys_of(set_difference(tn, rep.s_total))),
                               static_cast<long long>(a_set.size()) * L});
                }
            }

            if (!relays.empty()) {
                long long u_count = static_cast<long long>(relays.size());
                if (static_cast<int>(relay_view.size()) <= K - 1) {
                    audit.add({"lemma2.Y", mn,
                               cond_entropy(obs.keys_of(inst.complement(relay_view)), z_t), L});
                    if (static_cast<int>(relay_view.size()) == K - 1) {
                        UserSet missing = inst.complement(relay_view);
                        audit.add({"corollary2", mn + " user " + to_string(missing.members()[0]),
                                   cond_entropy(obs.keys_of(missing), z_t), L});
                    }
                }
                audit.add({"lemma3.Y", mn, cond_entropy(obs.keys_of(k_relays), z_t),
                           (u_count - (covered ? 1 : 0)) * L});
                if (static_cast<int>(set_union(sm, tn).size()) <= K - 1) {
                    UserSet e_set = set_intersection(relay_view, rep.s_total);
                    long long t_in_sbar =
                        static_cast<long long>(set_intersection(tn, rep.s_total).size());
                    audit.add({"lemma4.Y", mn,
                               cond_entropy(obs.keys_of(e_set),
                                            obs.keys_of(set_difference(tn, rep.s_total))),
                               (t_in_sbar + u_count - (covered ? 1 : 0)) * L});
                }
            }
        }
    }
    return audit;
}

inline LemmaAudit audit_lemmas(const Instance& inst, const LinearScheme& s) {
    return audit_lemmas(inst, s, quantities(inst));
}

}  // namespace wshsa
