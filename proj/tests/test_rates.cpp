#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"
#include "wshsa/rates.hpp"

using namespace wshsa;
using testsupport::example1;
using testsupport::example2;

TEST_CASE("example 1 rate is exactly 4") {
    RateResult r = optimal_rate(example1());
    REQUIRE(r.kind == RateResult::Kind::Exact);
    CHECK(r.exact == 4);
    CHECK(r.condition == Condition::C1Case3);
    CHECK(r.fractional == 0);
}

TEST_CASE("example 2 rate is exactly 5/2") {
    RateResult r = optimal_rate(example2());
    REQUIRE(r.kind == RateResult::Kind::Exact);
    CHECK(r.exact == Rational(5, 2));
    CHECK(r.condition == Condition::C2);
    CHECK(r.fractional == Rational(1, 2));
}

TEST_CASE("strong-security degeneration costs one extra key symbol") {
    RateResult r = optimal_rate(testsupport::strong_security());
    REQUIRE(r.kind == RateResult::Kind::Exact);
    CHECK(r.exact == 5);
}

TEST_CASE("infeasible instance reports no rate") {
    RateResult r = optimal_rate(testsupport::infeasible_pair());
    CHECK(r.infeasible());
    CHECK_THROWS_AS(r.target_rate(), std::logic_error);
    CHECK_THROWS_AS(per_user_key_profile(testsupport::infeasible_pair(), r), std::logic_error);
}

TEST_CASE("communication rates are the cut-set bounds") {
    auto [rx, ry] = communication_rates(example1(), optimal_rate(example1()));
    CHECK(rx == 1);
    CHECK(ry == 1);
    auto [rx2, ry2] = communication_rates(example2(), optimal_rate(example2()));
    CHECK(rx2 == 1);
    CHECK(ry2 == 1);
}

TEST_CASE("per-user profiles") {
    SECTION("example 1: full keys on the total security set, none elsewhere") {
        Instance inst = example1();
        auto profile = per_user_key_profile(inst, optimal_rate(inst));
        CHECK(profile.at({1, 1}) == 1);
        CHECK(profile.at({1, 2}) == 1);
        CHECK(profile.at({2, 1}) == 1);
        CHECK(profile.at({2, 2}) == 1);
        CHECK(profile.at({3, 1}) == 0);
        CHECK(profile.at({3, 2}) == 1);
    }
    SECTION("example 2: half-rate keys in the second cluster") {
        Instance inst = example2();
        auto profile = per_user_key_profile(inst, optimal_rate(inst));
        CHECK(profile.at({1, 1}) == 1);
        CHECK(profile.at({1, 2}) == 1);
        CHECK(profile.at({2, 1}) == Rational(1, 2));
        CHECK(profile.at({2, 2}) == Rational(1, 2));
        CHECK(profile.at({2, 3}) == Rational(1, 2));
    }
    SECTION("empty families need no keys at all") {
        Instance inst = testsupport::empty_families();
        auto profile = per_user_key_profile(inst, optimal_rate(inst));
        for (const auto& [id, v] : profile) CHECK(v == 0);
    }
}

namespace {

/// Comparable scalar for monotonicity: the exact rate, the lower bound for
/// bounds results, infinity for infeasible instances.
Rational comparable(const RateResult& r, bool* infeasible) {
    *infeasible = r.infeasible();
    if (r.kind == RateResult::Kind::Exact) return r.exact;
    if (r.kind == RateResult::Kind::Bounds) return r.lower;
    return 0;
}

}  // namespace

TEST_CASE("adding collusion sets never lowers the optimal rate") {
    std::mt19937_64 rng(9090);
    int done = 0;
    for (int trial = 0; trial < 120 && done < 40; ++trial) {
        Instance inst = testsupport::random_instance(rng);
        UserSet added = testsupport::random_subset(rng, inst.user_list(), 3);
        std::vector<UserSet> grown = inst.collusion_sets();
        grown.push_back(added);
        Instance bigger(inst.cluster_sizes(), inst.security_sets(), grown, /*auto_close=*/true);

        bool inf_before = false, inf_after = false;
        Rational before = comparable(optimal_rate(inst), &inf_before);
        Rational after = comparable(optimal_rate(bigger), &inf_after);
        if (inf_before) {
            CHECK(inf_after);  // more collusion cannot restore feasibility
            continue;
        }
        if (inf_after) {
            ++done;
            continue;
        }
        CAPTURE(inst.to_json().dump(), wshsa::to_string(added));
        CHECK(after >= before);
        ++done;
    }
    CHECK(done >= 40);
}
