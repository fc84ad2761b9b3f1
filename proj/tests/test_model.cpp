#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"
#include "wshsa/model.hpp"

using namespace wshsa;
using testsupport::example1;

TEST_CASE("example 1 document loads with both families already closed") {
    Instance inst = example1();
    CHECK(inst.num_clusters() == 3);
    CHECK(inst.num_users() == 6);
    CHECK(inst.num_security_sets() == 6);
    CHECK(inst.num_collusion_sets() == 8);
    CHECK(inst.security_set(1).empty());
    CHECK(inst.security_set(6) == UserSet{{1, 1}, {2, 1}});
    CHECK(inst.collusion_set(8) == UserSet{{1, 2}, {2, 2}, {3, 1}});
}

TEST_CASE("single-user clusters with empty families") {
    Instance inst(std::vector<int>{1, 1}, {UserSet{}}, {UserSet{}});
    CHECK(inst.num_security_sets() == 1);
    CHECK(inst.num_collusion_sets() == 1);
}

TEST_CASE("closure of a pair set adds the singletons and the empty set") {
    Instance inst(std::vector<int>{1, 1}, {UserSet{{1, 1}, {2, 1}}}, {UserSet{}});
    REQUIRE(inst.num_security_sets() == 4);
    CHECK(inst.security_set(1).empty());
    CHECK(inst.security_set(2) == UserSet{{1, 1}});
    CHECK(inst.security_set(3) == UserSet{{2, 1}});
    CHECK(inst.security_set(4) == UserSet{{1, 1}, {2, 1}});
}

TEST_CASE("monotone closure basics") {
    UserId a{1, 1}, b{2, 1};
    auto closed = monotone_close({UserSet{a, b}});
    REQUIRE(closed.size() == 4);
    CHECK(closed[0].empty());
    CHECK(closed[3] == UserSet{a, b});

    CHECK(monotone_close({UserSet{}}) == std::vector<UserSet>{UserSet{}});

    CHECK_FALSE(is_monotone({UserSet{a, b}}));
    CHECK(is_monotone({UserSet{}}));
}

TEST_CASE("example 1 families are already monotone; closure is brute-force checked") {
    Instance inst = example1();
    CHECK(is_monotone(inst.security_sets()));
    CHECK(is_monotone(inst.collusion_sets()));
    // Independent route: membership scan over the whole powerset.
    CHECK(monotone_close(inst.collusion_sets()) ==
          testsupport::brute_closure(inst, inst.collusion_sets()));
    CHECK(monotone_close(inst.security_sets()) ==
          testsupport::brute_closure(inst, inst.security_sets()));
}

TEST_CASE("closure properties on random families") {
    std::mt19937_64 rng(411);
    for (int trial = 0; trial < 40; ++trial) {
        Instance inst = testsupport::random_instance(rng);
        std::vector<UserSet> family;
        std::uniform_int_distribution<int> n_sets(1, 3);
        for (int i = n_sets(rng); i > 0; --i)
            family.push_back(testsupport::random_subset(rng, inst.user_list(), 4));
        auto closed = monotone_close(family);
        CHECK(monotone_close(closed) == closed);  // idempotent
        CHECK(closed.size() >= 1);
        for (const auto& s : family)
            CHECK(std::find(closed.begin(), closed.end(), s) != closed.end());
        CHECK(is_monotone(closed));
        CHECK(closed == testsupport::brute_closure(inst, family));
    }
}

TEST_CASE("canonical serialization round-trips exactly") {
    Instance inst = example1();
    json doc = inst.to_json();
    Instance reloaded = Instance::from_json(doc);
    CHECK(reloaded == inst);
    CHECK(reloaded.to_json().dump() == doc.dump());
}

TEST_CASE("validation failures") {
    CHECK_THROWS_AS(Instance(std::vector<int>{2}, {UserSet{}}, {UserSet{}}), ValidationError);
    CHECK_THROWS_AS(Instance(std::vector<int>{2, 0}, {UserSet{}}, {UserSet{}}), ValidationError);
    // Out-of-range member.
    CHECK_THROWS_AS(Instance(std::vector<int>{1, 1}, {UserSet{{1, 2}}}, {UserSet{}}),
                    ValidationError);
    CHECK_THROWS_AS(Instance(std::vector<int>{1, 1}, {UserSet{{3, 1}}}, {UserSet{}}),
                    ValidationError);
    // Raw families must be monotone and duplicate-free when closure is off.
    CHECK_THROWS_AS(Instance(std::vector<int>{1, 1}, {UserSet{{1, 1}}}, {UserSet{}},
                             /*auto_close=*/false),
                    ValidationError);
    CHECK_THROWS_AS(Instance(std::vector<int>{1, 1}, {UserSet{}, UserSet{}}, {UserSet{}},
                             /*auto_close=*/false),
                    ValidationError);
    // The same family is fine with closure on.
    CHECK_NOTHROW(Instance(std::vector<int>{1, 1}, {UserSet{{1, 1}}}, {UserSet{}}));
}

TEST_CASE("set algebra is exact") {
    UserSet a{{1, 1}, {1, 2}, {2, 1}};
    UserSet b{{1, 2}, {2, 2}};
    CHECK(set_union(a, b) == UserSet{{1, 1}, {1, 2}, {2, 1}, {2, 2}});
    CHECK(set_intersection(a, b) == UserSet{{1, 2}});
    CHECK(set_difference(a, b) == UserSet{{1, 1}, {2, 1}});
    CHECK(UserSet{{1, 2}}.subset_of(a));
    CHECK_FALSE(b.subset_of(a));
    CHECK(UserSet{}.subset_of(b));
}
