#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"
#include "wshsa/report.hpp"
#include "wshsa/synthesis.hpp"

using namespace wshsa;
using testsupport::example1;
using testsupport::example2;
using testsupport::instance_path;

TEST_CASE("the bundled example-1 scheme round-trips and passes checks") {
    LinearScheme s = scheme_from_file(instance_path("schemes/example1_scheme.json"));
    CHECK(s.q == 5);
    CHECK(s.L == 1);
    CHECK(s.Lz == 4);
    CHECK(s.zero_sum());
    CHECK(s.stacked_rank() == 4);

    json doc = scheme_to_json(s);
    LinearScheme back = scheme_from_json(doc);
    CHECK(scheme_to_json(back).dump() == doc.dump());
}

TEST_CASE("import rejects broken documents") {
    LinearScheme s = scheme_from_file(instance_path("schemes/example1_scheme.json"));
    json doc = scheme_to_json(s);

    SECTION("zero-sum violation") {
        doc["keys"][0]["rows"][0][0] = 2;
        CHECK_THROWS_WITH(scheme_from_json(doc), Catch::Matchers::ContainsSubstring("zero"));
    }
    SECTION("composite modulus") {
        doc["q"] = 6;
        CHECK_THROWS_WITH(scheme_from_json(doc), Catch::Matchers::ContainsSubstring("prime"));
    }
    SECTION("wrong row count") {
        doc["keys"][0]["rows"].push_back(json::array({0, 0, 0, 0}));
        CHECK_THROWS_AS(scheme_from_json(doc), SchemeError);
    }
    SECTION("missing user grid") {
        doc["keys"].erase(1);
        CHECK_THROWS_AS(scheme_from_json(doc), SchemeError);
    }
}

TEST_CASE("synthesis reproduces the worked example shapes") {
    SECTION("example 1: one symbol per input, four source symbols") {
        Instance inst = example1();
        AuxReport rep = quantities(inst);
        RateResult rate = optimal_rate(inst, rep);
        LinearScheme s = synthesize(inst, rep, rate);
        CHECK(s.L == 1);
        CHECK(s.Lz == 4);
        CHECK(s.zero_sum());
        CHECK(s.stacked_rank() == 4);
        // Per-user entropy equals the profile rate.
        for (const auto& [id, r] : rate.per_user)
            CHECK(Rational(rank(s.key_map(id)), s.L) == r);
        CHECK(Rational(s.Lz, s.L) == rate.exact);
    }
    SECTION("example 2: subpacketization two, five source symbols") {
        Instance inst = example2();
        AuxReport rep = quantities(inst);
        RateResult rate = optimal_rate(inst, rep);
        LinearScheme s = synthesize(inst, rep, rate);
        CHECK(s.L == 2);
        CHECK(s.Lz == 5);
        CHECK(s.zero_sum());
        for (const auto& [id, r] : rate.per_user)
            CHECK(Rational(rank(s.key_map(id)), s.L) == r);
        CHECK(Rational(s.Lz, s.L) == Rational(5, 2));
    }
    SECTION("empty profile: no keys, messages equal inputs") {
        Instance inst = testsupport::empty_families();
        AuxReport rep = quantities(inst);
        RateResult rate = optimal_rate(inst, rep);
        LinearScheme s = synthesize(inst, rep, rate);
        CHECK(s.Lz == 0);
        ProtocolTrace t = run_random_round(s, 5);
        CHECK(t.user_messages == t.inputs);
        CHECK(t.correct);
    }
}

TEST_CASE("synthesis is reproducible byte for byte") {
    Instance inst = example2();
    AuxReport rep = quantities(inst);
    RateResult rate = optimal_rate(inst, rep);
    SynthesisOptions opt;
    opt.seed = 42;
    LinearScheme a = synthesize(inst, rep, rate, opt);
    LinearScheme b = synthesize(inst, rep, rate, opt);
    CHECK(scheme_to_json(a).dump() == scheme_to_json(b).dump());
    CHECK(scheme_digest(a) == scheme_digest(b));
}

TEST_CASE("protocol rounds recover the sum exactly") {
    LinearScheme s = scheme_from_file(instance_path("schemes/example1_scheme.json"));

    SECTION("all-zero inputs cancel the keys") {
        std::vector<std::vector<std::uint64_t>> w(6, std::vector<std::uint64_t>(1, 0));
        ProtocolTrace t = run_round(s, w, {3, 1, 4, 2});
        CHECK(t.recovered_sum == std::vector<std::uint64_t>{0});
        CHECK(t.correct);
    }
    SECTION("random rounds over both worked schemes") {
        for (std::uint64_t seed = 0; seed < 25; ++seed) CHECK(run_random_round(s, seed).correct);
        LinearScheme s2 = scheme_from_file(instance_path("schemes/example2_scheme.json"));
        for (std::uint64_t seed = 0; seed < 25; ++seed) CHECK(run_random_round(s2, seed).correct);
    }
    SECTION("dimension mismatches are rejected") {
        std::vector<std::vector<std::uint64_t>> w(5, std::vector<std::uint64_t>(1, 0));
        CHECK_THROWS_AS(run_round(s, w, {0, 0, 0, 0}), std::invalid_argument);
        std::vector<std::vector<std::uint64_t>> w6(6, std::vector<std::uint64_t>(1, 0));
        CHECK_THROWS_AS(run_round(s, w6, {0, 0}), std::invalid_argument);
    }
}

TEST_CASE("trace serialization carries the whole round") {
    LinearScheme s = scheme_from_file(instance_path("schemes/example1_scheme.json"));
    ProtocolTrace t = run_random_round(s, 7);
    json doc = trace_to_json(t);
    CHECK(doc["correct"] == true);
    CHECK(doc["inputs"].size() == 6);
    CHECK(doc["relay_messages"].size() == 3);
}
