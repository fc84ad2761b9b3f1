#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace wshsa {

using json = nlohmann::ordered_json;

/// Raised on malformed documents and instances that fail validation.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// User (u,v): v-th user in cluster u, both 1-based to match the usual
/// (cluster, member) notation for hierarchical aggregation networks.
struct UserId {
    int u = 0;
    int v = 0;
    auto operator<=>(const UserId&) const = default;
};

inline std::string to_string(const UserId& id) {
    return "(" + std::to_string(id.u) + "," + std::to_string(id.v) + ")";
}

/// Immutable sorted user subset. All set algebra is exact; the sorted
/// representation is the canonical one used for ordering and serialization.
class UserSet {
public:
    UserSet() = default;
    UserSet(std::initializer_list<UserId> ids) : members_(ids) { normalize(); }
    explicit UserSet(std::vector<UserId> ids) : members_(std::move(ids)) { normalize(); }

    const std::vector<UserId>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }

    bool contains(UserId id) const {
        return std::binary_search(members_.begin(), members_.end(), id);
    }

    bool subset_of(const UserSet& other) const {
        return std::includes(other.members_.begin(), other.members_.end(),
                             members_.begin(), members_.end());
    }

    friend UserSet set_union(const UserSet& a, const UserSet& b) {
        std::vector<UserId> out;
        std::set_union(a.members_.begin(), a.members_.end(), b.members_.begin(),
                       b.members_.end(), std::back_inserter(out));
        return UserSet::from_sorted(std::move(out));
    }

    friend UserSet set_intersection(const UserSet& a, const UserSet& b) {
        std::vector<UserId> out;
        std::set_intersection(a.members_.begin(), a.members_.end(), b.members_.begin(),
                              b.members_.end(), std::back_inserter(out));
        return UserSet::from_sorted(std::move(out));
    }

    friend UserSet set_difference(const UserSet& a, const UserSet& b) {
        std::vector<UserId> out;
        std::set_difference(a.members_.begin(), a.members_.end(), b.members_.begin(),
                            b.members_.end(), std::back_inserter(out));
        return UserSet::from_sorted(std::move(out));
    }

    bool operator==(const UserSet&) const = default;

    /// Canonical family order: by size, then lexicographic member order.
    friend bool canonical_less(const UserSet& a, const UserSet& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.members_ < b.members_;
    }

    static UserSet from_sorted(std::vector<UserId> sorted) {
        UserSet s;
        s.members_ = std::move(sorted);
        return s;
    }

private:
    void normalize() {
        std::sort(members_.begin(), members_.end());
        members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    }

    std::vector<UserId> members_;
};

inline std::string to_string(const UserSet& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += to_string(s.members()[i]);
    }
    return out + "}";
}

/// Downward closure of a set family: every subset of every member,
/// deduplicated, in canonical (size, lexicographic) order. Always includes
/// the empty set.
inline std::vector<UserSet> monotone_close(const std::vector<UserSet>& family) {
    std::vector<UserSet> out;
    out.emplace_back();
    for (const auto& s : family) {
        const auto& m = s.members();
        if (m.size() > 20)
            throw ValidationError("set too large for monotone closure: " + to_string(s));
        for (std::uint32_t mask = 1; mask < (1u << m.size()); ++mask) {
            std::vector<UserId> sub;
            for (std::size_t i = 0; i < m.size(); ++i)
                if (mask & (1u << i)) sub.push_back(m[i]);
            out.push_back(UserSet::from_sorted(std::move(sub)));
        }
    }
    std::sort(out.begin(), out.end(),
              [](const UserSet& a, const UserSet& b) { return canonical_less(a, b); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline bool is_monotone(const std::vector<UserSet>& family) {
    if (family.empty()) return true;
    auto closed = monotone_close(family);
    auto sorted = family;
    std::sort(sorted.begin(), sorted.end(),
              [](const UserSet& a, const UserSet& b) { return canonical_less(a, b); });
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    return sorted == closed;
}

/// A validated aggregation instance: cluster sizes plus the two monotone
/// set families (security input sets S_m, collusion sets T_n). Immutable
/// after construction; safe to share across threads.
class Instance {
public:
    Instance(std::vector<int> cluster_sizes, std::vector<UserSet> security_sets,
             std::vector<UserSet> collusion_sets, bool auto_close = true)
        : cluster_sizes_(std::move(cluster_sizes)),
          security_sets_(std::move(security_sets)),
          collusion_sets_(std::move(collusion_sets)),
          auto_close_(auto_close) {
        validate_topology();
        validate_family(security_sets_, "security_sets");
        validate_family(collusion_sets_, "collusion_sets");
        if (auto_close_) {
            security_sets_ = monotone_close(security_sets_);
            collusion_sets_ = monotone_close(collusion_sets_);
        } else {
            check_raw_family(security_sets_, "security_sets");
            check_raw_family(collusion_sets_, "collusion_sets");
            auto by_canonical = [](const UserSet& a, const UserSet& b) {
                return canonical_less(a, b);
            };
            std::sort(security_sets_.begin(), security_sets_.end(), by_canonical);
            std::sort(collusion_sets_.begin(), collusion_sets_.end(), by_canonical);
        }
    }

    int num_clusters() const { return static_cast<int>(cluster_sizes_.size()); }
    int cluster_size(int u) const { return cluster_sizes_.at(static_cast<std::size_t>(u - 1)); }
    const std::vector<int>& cluster_sizes() const { return cluster_sizes_; }

    int num_users() const {
        int k = 0;
        for (int s : cluster_sizes_) k += s;
        return k;
    }

    UserSet cluster(int u) const {
        std::vector<UserId> ids;
        for (int v = 1; v <= cluster_size(u); ++v) ids.push_back({u, v});
        return UserSet::from_sorted(std::move(ids));
    }

    /// Union of the clusters of the given relays.
    UserSet clusters_of(const std::vector<int>& relays) const {
        UserSet out;
        for (int u : relays) out = set_union(out, cluster(u));
        return out;
    }

    UserSet all_users() const {
        std::vector<UserId> ids;
        for (int u = 1; u <= num_clusters(); ++u)
            for (int v = 1; v <= cluster_size(u); ++v) ids.push_back({u, v});
        return UserSet::from_sorted(std::move(ids));
    }

    UserSet complement(const UserSet& s) const { return set_difference(all_users(), s); }

    const std::vector<UserSet>& security_sets() const { return security_sets_; }
    const std::vector<UserSet>& collusion_sets() const { return collusion_sets_; }
    int num_security_sets() const { return static_cast<int>(security_sets_.size()); }
    int num_collusion_sets() const { return static_cast<int>(collusion_sets_.size()); }
    /// 1-based accessors matching the S_m / T_n indexing.
    const UserSet& security_set(int m) const { return security_sets_.at(static_cast<std::size_t>(m - 1)); }
    const UserSet& collusion_set(int n) const { return collusion_sets_.at(static_cast<std::size_t>(n - 1)); }
    bool auto_close() const { return auto_close_; }

    /// All users, canonical order. Index of a user in this order is the
    /// standard column/row index used by schemes and LPs.
    std::vector<UserId> user_list() const { return all_users().members(); }

    int user_index(UserId id) const {
        int idx = 0;
        for (int u = 1; u < id.u; ++u) idx += cluster_size(u);
        return idx + id.v - 1;
    }

    json to_json() const {
        json doc;
        doc["clusters"] = cluster_sizes_;
        doc["security_sets"] = family_to_json(security_sets_);
        doc["collusion_sets"] = family_to_json(collusion_sets_);
        doc["auto_close"] = auto_close_;
        return doc;
    }

    static Instance from_json(const json& doc) {
        if (!doc.is_object()) throw ValidationError("instance document must be an object");
        if (!doc.contains("clusters")) throw ValidationError("missing field: clusters");
        std::vector<int> clusters;
        for (const auto& c : doc.at("clusters")) {
            if (!c.is_number_integer() || c.get<int>() <= 0)
                throw ValidationError("cluster sizes must be positive integers");
            clusters.push_back(c.get<int>());
        }
        bool auto_close = doc.value("auto_close", true);
        return Instance(clusters, family_from_json(doc, "security_sets"),
                        family_from_json(doc, "collusion_sets"), auto_close);
    }

    static Instance from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ValidationError("cannot open instance file: " + path);
        json doc;
        try {
            in >> doc;
        } catch (const json::exception& e) {
            throw ValidationError("malformed instance document " + path + ": " + e.what());
        }
        return from_json(doc);
    }

    bool operator==(const Instance&) const = default;

private:
    void validate_topology() const {
        if (cluster_sizes_.size() < 2) throw ValidationError("need at least 2 clusters");
        for (int s : cluster_sizes_)
            if (s <= 0) throw ValidationError("cluster sizes must be positive");
    }

    void validate_family(const std::vector<UserSet>& family, const char* name) const {
        if (family.empty()) throw ValidationError(std::string(name) + " must list at least one set");
        for (const auto& s : family)
            for (const auto& id : s.members())
                if (id.u < 1 || id.u > num_clusters() || id.v < 1 || id.v > cluster_size(id.u))
                    throw ValidationError(std::string(name) + ": user " + to_string(id) +
                                          " is outside the topology");
    }

    void check_raw_family(const std::vector<UserSet>& family, const char* name) const {
        std::vector<UserSet> sorted = family;
        std::sort(sorted.begin(), sorted.end(),
                  [](const UserSet& a, const UserSet& b) { return canonical_less(a, b); });
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw ValidationError(std::string(name) + ": duplicate sets with auto_close=false");
        if (!is_monotone(family))
            throw ValidationError(std::string(name) + ": family is not monotone (auto_close=false)");
    }

    static json family_to_json(const std::vector<UserSet>& family) {
        json arr = json::array();
        for (const auto& s : family) {
            json set = json::array();
            for (const auto& id : s.members()) set.push_back(json::array({id.u, id.v}));
            arr.push_back(set);
        }
        return arr;
    }

    static std::vector<UserSet> family_from_json(const json& doc, const char* key) {
        if (!doc.contains(key)) throw ValidationError(std::string("missing field: ") + key);
        std::vector<UserSet> family;
        for (const auto& set : doc.at(key)) {
            std::vector<UserId> ids;
            for (const auto& pair : set) {
                if (!pair.is_array() || pair.size() != 2)
                    throw ValidationError(std::string(key) + ": members must be [u,v] pairs");
                ids.push_back({pair[0].get<int>(), pair[1].get<int>()});
            }
            family.emplace_back(std::move(ids));
        }
        return family;
    }

    std::vector<int> cluster_sizes_;
    std::vector<UserSet> security_sets_;
    std::vector<UserSet> collusion_sets_;
    bool auto_close_ = true;
};

/// Canonical serialization: families sorted by (size, lex). An instance
/// loaded with auto_close already holds them in that order.
inline std::string canonical_instance_text(const Instance& inst) { return inst.to_json().dump(2); }

}  // namespace wshsa
