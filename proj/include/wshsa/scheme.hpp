#pragma once

#include <cstdint>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wshsa/gf.hpp"
#include "wshsa/model.hpp"

namespace wshsa {

/// Linear key scheme: Z_{u,v} = G_{u,v} · N for a uniform source key N of
/// Lz symbols. Keys sum to zero so plain addition recovers the input sum.
struct LinearScheme {
    std::uint64_t q = 2;
    int L = 1;   // symbols per input
    int Lz = 0;  // source key symbols
    std::vector<int> clusters;
    std::vector<Mat> key_maps;  // canonical user order, each L x Lz

    int num_users() const {
        int k = 0;
        for (int c : clusters) k += c;
        return k;
    }

    int user_index(UserId id) const {
        int idx = 0;
        for (int u = 1; u < id.u; ++u) idx += clusters.at(static_cast<std::size_t>(u - 1));
        return idx + id.v - 1;
    }

    const Mat& key_map(UserId id) const { return key_maps.at(static_cast<std::size_t>(user_index(id))); }

    Mat key_map_sum() const {
        Mat sum(q, static_cast<std::size_t>(L), static_cast<std::size_t>(Lz));
        for (const auto& g : key_maps) sum = sum + g;
        return sum;
    }

    bool zero_sum() const { return key_map_sum().is_zero(); }

    /// Rank of all key maps stacked: the number of source symbols actually
    /// used, i.e. H(Z_K) in symbols.
    std::size_t stacked_rank() const {
        return rank(vstack(key_maps, q, static_cast<std::size_t>(Lz)));
    }
};

struct SchemeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline json scheme_to_json(const LinearScheme& s) {
    json doc;
    doc["q"] = s.q;
    doc["L"] = s.L;
    doc["Lz"] = s.Lz;
    doc["clusters"] = s.clusters;
    json keys = json::array();
    int idx = 0;
    for (int u = 1; u <= static_cast<int>(s.clusters.size()); ++u) {
        for (int v = 1; v <= s.clusters[static_cast<std::size_t>(u - 1)]; ++v, ++idx) {
            const Mat& g = s.key_maps.at(static_cast<std::size_t>(idx));
            json rows = json::array();
            for (std::size_t r = 0; r < g.rows; ++r) {
                json row = json::array();
                for (std::size_t c = 0; c < g.cols; ++c) row.push_back(g.at(r, c));
                rows.push_back(row);
            }
            keys.push_back(json{{"user", json::array({u, v})}, {"rows", rows}});
        }
    }
    doc["keys"] = keys;
    return doc;
}

inline LinearScheme scheme_from_json(const json& doc) {
    LinearScheme s;
    try {
        s.q = doc.at("q").get<std::uint64_t>();
        s.L = doc.at("L").get<int>();
        s.Lz = doc.at("Lz").get<int>();
        s.clusters = doc.at("clusters").get<std::vector<int>>();
    } catch (const json::exception& e) {
        throw SchemeError(std::string("malformed scheme document: ") + e.what());
    }
    if (!is_prime(s.q)) throw SchemeError("scheme modulus is not prime: " + std::to_string(s.q));
    if (s.L <= 0 || s.Lz < 0) throw SchemeError("bad scheme dimensions");
    const int K = s.num_users();
    s.key_maps.assign(static_cast<std::size_t>(K),
                      Mat(s.q, static_cast<std::size_t>(s.L), static_cast<std::size_t>(s.Lz)));
    std::vector<bool> seen(static_cast<std::size_t>(K), false);
    for (const auto& entry : doc.at("keys")) {
        UserId id{entry.at("user").at(0).get<int>(), entry.at("user").at(1).get<int>()};
        if (id.u < 1 || id.u > static_cast<int>(s.clusters.size()) || id.v < 1 ||
            id.v > s.clusters[static_cast<std::size_t>(id.u - 1)])
            throw SchemeError("scheme key for unknown user " + to_string(id));
        int idx = s.user_index(id);
        if (seen[static_cast<std::size_t>(idx)]) throw SchemeError("duplicate key grid for " + to_string(id));
        seen[static_cast<std::size_t>(idx)] = true;
        const auto& rows = entry.at("rows");
        if (static_cast<int>(rows.size()) != s.L)
            throw SchemeError("key grid for " + to_string(id) + " must have L rows");
        Mat g(s.q, static_cast<std::size_t>(s.L), static_cast<std::size_t>(s.Lz));
        for (std::size_t r = 0; r < g.rows; ++r) {
            const auto& row = rows[r];
            if (static_cast<int>(row.size()) != s.Lz)
                throw SchemeError("key grid for " + to_string(id) + " must have Lz columns");
            for (std::size_t c = 0; c < g.cols; ++c) g.set(r, c, row[c].get<std::int64_t>());
        }
        s.key_maps[static_cast<std::size_t>(idx)] = std::move(g);
    }
    for (bool b : seen)
        if (!b) throw SchemeError("scheme is missing a key grid");
    if (!s.zero_sum()) throw SchemeError("key maps do not sum to zero");
    return s;
}

inline LinearScheme scheme_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemeError("cannot open scheme file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw SchemeError("malformed scheme file " + path + ": " + e.what());
    }
    return scheme_from_json(doc);
}

/// One protocol execution: X = W + Z, Y_u = sum of cluster messages,
/// recovered sum = sum of relay messages.
struct ProtocolTrace {
    std::vector<std::vector<std::uint64_t>> inputs;  // per user, L symbols
    std::vector<std::uint64_t> source_key;           // Lz symbols
    std::vector<std::vector<std::uint64_t>> keys;    // per user, L symbols
    std::vector<std::vector<std::uint64_t>> user_messages;   // X_{u,v}
    std::vector<std::vector<std::uint64_t>> relay_messages;  // Y_u
    std::vector<std::uint64_t> recovered_sum;
    std::vector<std::uint64_t> true_sum;
    bool correct = false;
};

inline ProtocolTrace run_round(const LinearScheme& s,
                               const std::vector<std::vector<std::uint64_t>>& inputs,
                               const std::vector<std::uint64_t>& source_key) {
    const int K = s.num_users();
    if (static_cast<int>(inputs.size()) != K)
        throw std::invalid_argument("run_round: need one input vector per user");
    for (const auto& w : inputs)
        if (static_cast<int>(w.size()) != s.L)
            throw std::invalid_argument("run_round: inputs must have L symbols");
    if (static_cast<int>(source_key.size()) != s.Lz)
        throw std::invalid_argument("run_round: source key must have Lz symbols");

    Fp f(s.q);
    ProtocolTrace t;
    t.inputs = inputs;
    t.source_key = source_key;
    t.keys.assign(static_cast<std::size_t>(K), std::vector<std::uint64_t>(static_cast<std::size_t>(s.L), 0));
    t.user_messages = t.keys;
    for (int i = 0; i < K; ++i) {
        const Mat& g = s.key_maps[static_cast<std::size_t>(i)];
        for (std::size_t r = 0; r < g.rows; ++r) {
            std::uint64_t acc = 0;
            for (std::size_t c = 0; c < g.cols; ++c)
                acc = f.add(acc, f.mul(g.at(r, c), source_key[c] % s.q));
            t.keys[static_cast<std::size_t>(i)][r] = acc;
            t.user_messages[static_cast<std::size_t>(i)][r] =
                f.add(inputs[static_cast<std::size_t>(i)][r] % s.q, acc);
        }
    }
    t.relay_messages.assign(s.clusters.size(), std::vector<std::uint64_t>(static_cast<std::size_t>(s.L), 0));
    int idx = 0;
    for (std::size_t u = 0; u < s.clusters.size(); ++u)
        for (int v = 0; v < s.clusters[u]; ++v, ++idx)
            for (int r = 0; r < s.L; ++r)
                t.relay_messages[u][static_cast<std::size_t>(r)] =
                    f.add(t.relay_messages[u][static_cast<std::size_t>(r)],
                          t.user_messages[static_cast<std::size_t>(idx)][static_cast<std::size_t>(r)]);
    t.recovered_sum.assign(static_cast<std::size_t>(s.L), 0);
    for (const auto& y : t.relay_messages)
        for (int r = 0; r < s.L; ++r)
            t.recovered_sum[static_cast<std::size_t>(r)] =
                f.add(t.recovered_sum[static_cast<std::size_t>(r)], y[static_cast<std::size_t>(r)]);
    t.true_sum.assign(static_cast<std::size_t>(s.L), 0);
    for (const auto& w : t.inputs)
        for (int r = 0; r < s.L; ++r)
            t.true_sum[static_cast<std::size_t>(r)] =
                f.add(t.true_sum[static_cast<std::size_t>(r)], w[static_cast<std::size_t>(r)] % s.q);
    t.correct = t.recovered_sum == t.true_sum;
    return t;
}

/// Seeded uniform round, for the simulator and the correctness tests.
inline ProtocolTrace run_random_round(const LinearScheme& s, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> dist(0, s.q - 1);
    std::vector<std::vector<std::uint64_t>> inputs(
        static_cast<std::size_t>(s.num_users()),
        std::vector<std::uint64_t>(static_cast<std::size_t>(s.L), 0));
    for (auto& w : inputs)
        for (auto& x : w) x = dist(rng);
    std::vector<std::uint64_t> key(static_cast<std::size_t>(s.Lz), 0);
    for (auto& x : key) x = dist(rng);
    return run_round(s, inputs, key);
}

inline json trace_to_json(const ProtocolTrace& t) {
    json doc;
    doc["inputs"] = t.inputs;
    doc["source_key"] = t.source_key;
    doc["keys"] = t.keys;
    doc["user_messages"] = t.user_messages;
    doc["relay_messages"] = t.relay_messages;
    doc["recovered_sum"] = t.recovered_sum;
    doc["true_sum"] = t.true_sum;
    doc["correct"] = t.correct;
    return doc;
}

}  // namespace wshsa
