#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "wshsa/analysis.hpp"
#include "wshsa/gf.hpp"
#include "wshsa/model.hpp"
#include "wshsa/rates.hpp"
#include "wshsa/scheme.hpp"
#include "wshsa/security.hpp"

namespace wshsa {

struct SynthesisError : std::runtime_error {
    SynthesisError(const std::string& msg, int attempts_, std::uint64_t final_q_)
        : std::runtime_error(msg), attempts(attempts_), final_q(final_q_) {}
    int attempts = 0;
    std::uint64_t final_q = 0;
};

struct SynthesisOptions {
    std::uint64_t seed = 0;
    std::uint64_t q = 0;  // 0: pick the default modulus
    int retry_budget = 64;
};

inline Int binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    Int r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

/// Smallest prime above max(K·Lz, Lz·C(K·L, Lz)), capped so trial-division
/// primality stays cheap. Generic-position coefficient choices only need a
/// large enough field; the verifier is the final authority.
inline std::uint64_t default_modulus(int K, int L, int Lz) {
    const Int cap = Int(1) << 20;
    Int bound = Int(K) * std::max(Lz, 1);
    Int mds = Int(std::max(Lz, 1)) * binomial(K * L, std::min(Lz, K * L));
    Int b = std::max(bound, mds);
    if (b > cap) b = cap;
    std::uint64_t floor = static_cast<std::uint64_t>(b);
    floor = std::max<std::uint64_t>(floor, static_cast<std::uint64_t>(K) * L + Lz + 1);
    return next_prime(floor);
}

namespace detail {

struct SynthPlan {
    int L = 1;
    int Lz = 0;
    std::vector<UserId> users;
    std::vector<int> key_symbols;  // profile rate * L per user
    std::size_t absorber = SIZE_MAX;
    std::vector<std::size_t> spare_absorbers;  // zero-profile users outside Q
};

inline SynthPlan make_plan(const Instance& inst, const AuxReport& rep, const RateResult& rate) {
    SynthPlan plan;
    std::vector<Rational> denoms;
    for (const auto& [id, r] : rate.per_user) denoms.push_back(r);
    denoms.push_back(rate.target_rate());
    plan.L = static_cast<int>(denominator_lcm(denoms));
    plan.Lz = static_cast<int>(to_int64(rate.target_rate() * plan.L));
    plan.users = inst.user_list();
    for (const auto& id : plan.users) {
        Rational r = rate.per_user.at(id);
        plan.key_symbols.push_back(static_cast<int>(to_int64(r * plan.L)));
    }
    for (std::size_t i = 0; i < plan.users.size(); ++i) {
        if (rep.s_total.contains(plan.users[i]) && plan.key_symbols[i] == plan.L) {
            plan.absorber = i;
            break;
        }
    }
    // Zero-profile users outside Q may carry absorber mass; prefer those no
    // colluder set ever sees.
    UserSet t_union;
    for (const auto& t : inst.collusion_sets()) t_union = set_union(t_union, t);
    std::vector<std::size_t> uncolluded, colluded;
    for (std::size_t i = 0; i < plan.users.size(); ++i) {
        if (plan.key_symbols[i] != 0 || rep.q.contains(plan.users[i])) continue;
        (t_union.contains(plan.users[i]) ? colluded : uncolluded).push_back(i);
    }
    plan.spare_absorbers = uncolluded;
    plan.spare_absorbers.insert(plan.spare_absorbers.end(), colluded.begin(), colluded.end());
    return plan;
}

inline Mat random_rank_exact(std::mt19937_64& rng, std::uint64_t q, std::size_t rows,
                             std::size_t cols, std::size_t target_rank) {
    std::uniform_int_distribution<std::uint64_t> dist(0, q - 1);
    for (int tries = 0; tries < 32; ++tries) {
        Mat left(q, rows, target_rank), right(q, target_rank, cols);
        for (auto& v : left.a) v = dist(rng);
        for (auto& v : right.a) v = dist(rng);
        Mat g = target_rank == 0 ? Mat(q, rows, cols) : left * right;
        if (rank(g) == target_rank) return g;
    }
    throw std::logic_error("could not sample a matrix of the requested rank");
}

/// First attempt: the explicit construction behind the worked schemes.
/// Fractional users get dedicated source symbols replicated across the L
/// subpackets with per-user multipliers; full-rate users get fresh identity
/// blocks; one designated user absorbs the negative sum.
inline bool deterministic_attempt(const SynthPlan& plan, std::uint64_t q,
                                  std::vector<Mat>& out) {
    const std::size_t n = plan.users.size();
    const std::size_t L = static_cast<std::size_t>(plan.L);
    const std::size_t Lz = static_cast<std::size_t>(plan.Lz);
    out.assign(n, Mat(q, L, Lz));
    if (plan.Lz == 0) return true;
    if (plan.absorber == SIZE_MAX) return false;

    Fp f(q);
    int total = 0;
    for (std::size_t i = 0; i < n; ++i) total += plan.key_symbols[i];
    const int total_nonabs = total - plan.key_symbols[plan.absorber];

    enum class Mode { SingleAbsorber, DistributedAbsorbers };
    Mode mode;
    if (plan.Lz == total_nonabs) {
        mode = Mode::SingleAbsorber;
    } else if (plan.Lz == total) {
        if (plan.spare_absorbers.empty()) return false;
        mode = Mode::DistributedAbsorbers;
    } else if (plan.Lz < total_nonabs) {
        mode = Mode::SingleAbsorber;  // overflow users get mixed rows below
    } else {
        return false;  // Lz > total key budget: no allocation with this profile
    }

    const bool skip_absorber = (mode == Mode::SingleAbsorber);
    std::size_t next_col = 0;
    std::uint64_t next_point = 1;
    std::vector<std::size_t> overflow;
    for (std::size_t i = 0; i < n; ++i) {
        int k = plan.key_symbols[i];
        if (k == 0 || (skip_absorber && i == plan.absorber)) continue;
        if (next_col + static_cast<std::size_t>(k) > Lz) {
            overflow.push_back(i);
            continue;
        }
        if (k == plan.L) {
            for (std::size_t r = 0; r < L; ++r) out[i].at(r, next_col + r) = 1;
        } else {
            // (S; αS; α²S; ...) pattern, one fresh symbol per dedicated column.
            for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
                if (next_point >= q) return false;
                for (std::size_t r = 0; r < L; ++r)
                    out[i].at(r, next_col + c) = f.pow(next_point, r);
                ++next_point;
            }
        }
        next_col += static_cast<std::size_t>(k);
    }
    for (std::size_t i : overflow) {
        // Full-rank mix across every source symbol, distinct point per row.
        for (std::size_t r = 0; r < L; ++r) {
            if (next_point >= q) return false;
            for (std::size_t c = 0; c < Lz; ++c) out[i].at(r, c) = f.pow(next_point, c);
            ++next_point;
        }
    }
    if (next_col != Lz && overflow.empty() && mode == Mode::SingleAbsorber && plan.Lz < total_nonabs)
        return false;

    Mat deficit(q, L, Lz);
    for (std::size_t i = 0; i < n; ++i) deficit = deficit + out[i];
    deficit = deficit.negated();
    if (mode == Mode::SingleAbsorber) {
        out[plan.absorber] = deficit;
    } else {
        // The spares' keys must stay pairwise dependent (otherwise colluding
        // with two of them can pin individual source symbols), so the whole
        // deficit goes to the first spare.
        out[plan.spare_absorbers.front()] = deficit;
    }
    return true;
}

/// Share the deficit across the spares as random multiples summing to one.
inline void split_deficit(const SynthPlan& plan, const Mat& deficit, std::mt19937_64& rng,
                          std::vector<Mat>& out) {
    Fp f(deficit.q);
    std::uniform_int_distribution<std::uint64_t> dist(0, deficit.q - 1);
    std::uint64_t used = 0;
    for (std::size_t j = 0; j < plan.spare_absorbers.size(); ++j) {
        std::uint64_t lambda = j + 1 == plan.spare_absorbers.size() ? f.sub(1, used) : dist(rng);
        used = f.add(used, lambda);
        Mat share = deficit;
        for (auto& v : share.a) v = f.mul(v, lambda);
        out[plan.spare_absorbers[j]] = share;
    }
}

inline bool random_attempt(const SynthPlan& plan, std::uint64_t q, std::mt19937_64& rng,
                           std::vector<Mat>& out) {
    const std::size_t n = plan.users.size();
    const std::size_t L = static_cast<std::size_t>(plan.L);
    const std::size_t Lz = static_cast<std::size_t>(plan.Lz);
    out.assign(n, Mat(q, L, Lz));
    if (plan.Lz == 0) return true;
    if (plan.absorber == SIZE_MAX) return false;

    int total = 0;
    for (std::size_t i = 0; i < n; ++i) total += plan.key_symbols[i];
    const bool distributed = plan.Lz == total;
    if (distributed && plan.spare_absorbers.empty()) return false;
    if (plan.Lz > total) return false;

    for (std::size_t i = 0; i < n; ++i) {
        if (!distributed && i == plan.absorber) continue;
        std::size_t target = static_cast<std::size_t>(plan.key_symbols[i]);
        if (target == 0) continue;
        out[i] = random_rank_exact(rng, q, L, Lz, std::min(target, std::min(L, Lz)));
    }
    Mat deficit(q, L, Lz);
    for (std::size_t i = 0; i < n; ++i) deficit = deficit + out[i];
    deficit = deficit.negated();
    if (distributed) {
        split_deficit(plan, deficit, rng, out);
    } else {
        out[plan.absorber] = deficit;
    }
    return true;
}

inline bool structure_ok(const SynthPlan& plan, const AuxReport& rep,
                         const std::vector<Mat>& maps, std::uint64_t q) {
    if (plan.Lz == 0) return true;
    for (std::size_t i = 0; i < plan.users.size(); ++i) {
        std::size_t r = rank(maps[i]);
        int k = plan.key_symbols[i];
        if (k > 0 && r != static_cast<std::size_t>(std::min(k, plan.L))) return false;
        if (k == 0 && !rep.s_total.contains(plan.users[i]) && r > static_cast<std::size_t>(plan.L))
            return false;
    }
    Mat stacked = vstack(maps, q, static_cast<std::size_t>(plan.Lz));
    return rank(stacked) == static_cast<std::size_t>(plan.Lz);
}

}  // namespace detail

/// Generate-and-verify synthesis: a deterministic paper-pattern attempt, then
/// seeded random candidates under the same zero-sum and rank structure, each
/// submitted to the exact verifier. Escalates the field size once before
/// giving up.
inline LinearScheme synthesize(const Instance& inst, const AuxReport& rep,
                               const RateResult& rate, const SynthesisOptions& opt = {}) {
    if (rate.infeasible())
        throw std::logic_error("cannot synthesize a scheme for an infeasible instance");
    detail::SynthPlan plan = detail::make_plan(inst, rep, rate);

    std::uint64_t q = opt.q ? opt.q : default_modulus(inst.num_users(), plan.L, plan.Lz);
    if (!is_prime(q)) throw SchemeError("field override is not prime: " + std::to_string(q));

    int attempts = 0;
    for (int round = 0; round < 2; ++round) {
        for (int t = 0; t <= opt.retry_budget; ++t) {
            ++attempts;
            std::vector<Mat> maps;
            bool built;
            if (t == 0) {
                built = detail::deterministic_attempt(plan, q, maps);
            } else {
                std::seed_seq seq{opt.seed, static_cast<std::uint64_t>(t), q};
                std::mt19937_64 rng(seq);
                built = detail::random_attempt(plan, q, rng, maps);
            }
            if (!built || !detail::structure_ok(plan, rep, maps, q)) continue;
            LinearScheme s;
            s.q = q;
            s.L = plan.L;
            s.Lz = plan.Lz;
            s.clusters = inst.cluster_sizes();
            s.key_maps = std::move(maps);
            if (verify(inst, s).all_pass) return s;
        }
        q = next_prime(2 * q);
    }
    throw SynthesisError("synthesis retries exhausted (rate " + describe(rate) +
                             ", escalated to q=" + std::to_string(q) + ")",
                         attempts, q);
}

inline LinearScheme synthesize(const Instance& inst, const SynthesisOptions& opt = {}) {
    AuxReport rep = quantities(inst);
    RateResult rate = optimal_rate(inst, rep);
    return synthesize(inst, rep, rate, opt);
}

}  // namespace wshsa
