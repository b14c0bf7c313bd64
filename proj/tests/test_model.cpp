#include "hawkes_mdl/io.hpp"
#include "hawkes_mdl/model.hpp"
#include "hawkes_mdl/rng.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace hawkes_mdl;

namespace {

template <typename F>
std::string error_of(F&& f) {
    try {
        f();
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(EventData, AcceptsWellFormedInput) {
    const EventData x = EventData::validate(10.0, 1, {{1.0, 2.0}});
    EXPECT_EQ(x.dim(), 1u);
    EXPECT_EQ(x.count(0), 2u);
    EXPECT_DOUBLE_EQ(x.horizon(), 10.0);
}

TEST(EventData, RejectsNonMonotoneSequence) {
    EXPECT_NE(error_of([] { EventData::validate(10.0, 1, {{2.0, 1.0}}); }).find("non-monotone"), std::string::npos);
    EXPECT_NE(error_of([] { EventData::validate(10.0, 1, {{1.0, 1.0}}); }).find("non-monotone"), std::string::npos);
}

TEST(EventData, RejectsDimensionMismatch) {
    EXPECT_NE(error_of([] { EventData::validate(10.0, 2, {{1.0}}); }).find("dimension mismatch"), std::string::npos);
}

TEST(EventData, RejectsOutOfRangeTimestamps) {
    EXPECT_NE(error_of([] { EventData::validate(10.0, 1, {{-0.5}}); }).find("out-of-range"), std::string::npos);
    EXPECT_NE(error_of([] { EventData::validate(10.0, 1, {{10.5}}); }).find("out-of-range"), std::string::npos);
    EXPECT_THROW(EventData::validate(0.0, 1, {{}}), ValidationError);
}

TEST(EventData, AcceptsEventAtHorizon) {
    EXPECT_NO_THROW(EventData::validate(10.0, 1, {{0.0, 10.0}}));
}

TEST(EventData, JsonRoundTripIsIdentity) {
    Rng rng(SeedSpec{11, {}});
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<std::vector<double>> ev(3);
        for (auto& row : ev) {
            double t = 0.0;
            for (int k = 0; k < 30; ++k) {
                t += rng.exponential(2.0);
                if (t <= 50.0) {
                    row.push_back(t);
                }
            }
        }
        const EventData x = EventData::validate(50.0, 3, ev);
        const Json j = to_json(x, Provenance{"abc", 5});
        EXPECT_EQ(event_data_from_json(Json::parse(j.dump())), x);
    }
}

TEST(EventData, StrictJsonParsing) {
    Json j = to_json(EventData::validate(5.0, 1, {{1.0}}));
    j["extra"] = 1;
    EXPECT_THROW(event_data_from_json(j), ValidationError);
}

TEST(RowPattern, ParseAndPrintUseColumnOrder) {
    const RowPattern r = RowPattern::parse("0110");
    EXPECT_EQ(r.dim(), 4u);
    EXPECT_FALSE(r.test(0));
    EXPECT_TRUE(r.test(1));
    EXPECT_TRUE(r.test(2));
    EXPECT_FALSE(r.test(3));
    EXPECT_EQ(r.to_string(), "0110");
    EXPECT_EQ(r.count(), 2u);
    EXPECT_EQ(r.members(), (std::vector<std::size_t>{1, 2}));
    EXPECT_THROW(RowPattern::parse("01x"), ValidationError);
}

TEST(RowPattern, OrderingIsLexicographicOnBitString) {
    std::set<RowPattern> sorted;
    std::set<std::string> strings;
    for (std::uint64_t b = 0; b < 16; ++b) {
        sorted.insert(RowPattern(4, b));
        strings.insert(RowPattern(4, b).to_string());
    }
    auto it = strings.begin();
    for (const auto& r : sorted) {
        EXPECT_EQ(r.to_string(), *it++);
    }
}

TEST(RowPattern, SubsetRelation) {
    EXPECT_TRUE(RowPattern::parse("010").subset_of(RowPattern::parse("110")));
    EXPECT_FALSE(RowPattern::parse("011").subset_of(RowPattern::parse("110")));
    EXPECT_TRUE(RowPattern::empty(3).subset_of(RowPattern::full(3)));
}

TEST(Adjacency, RowsReassembleToMatrix) {
    const std::vector<std::vector<int>> m{{1, 0, 1}, {0, 1, 0}, {1, 1, 1}};
    const Adjacency a = Adjacency::from_matrix(m);
    EXPECT_EQ(a.to_matrix(), m);
    EXPECT_EQ(Adjacency(a.rows()), a);
    EXPECT_EQ(a.count(), 6u);
    EXPECT_EQ(adjacency_from_json(to_json(a, Provenance{"d", 1})), a);
}

TEST(Adjacency, RejectsNonBinaryEntries) {
    EXPECT_THROW(Adjacency::from_matrix({{0, 2}, {1, 0}}), ValidationError);
    EXPECT_THROW(Adjacency::from_matrix({{0, 1}}), ValidationError);
}

TEST(ExpMhpParams, ValidatesShapesAndSigns) {
    EXPECT_NO_THROW(ExpMhpParams({0.5}, {{0.1}}, {{1.0}}));
    EXPECT_THROW(ExpMhpParams({-0.5}, {{0.1}}, {{1.0}}), ValidationError);
    EXPECT_THROW(ExpMhpParams({0.5}, {{-0.1}}, {{1.0}}), ValidationError);
    EXPECT_THROW(ExpMhpParams({0.5}, {{0.1}}, {{0.0}}), ValidationError);
    EXPECT_THROW(ExpMhpParams({0.5, 0.5}, {{0.1}}, {{1.0}}), ValidationError);
    const ExpMhpParams p({0.5, 0.2}, {{0.1, 0.0}, {0.3, 0.2}}, {{1.0, 1.0}, {1.0, 2.0}});
    EXPECT_EQ(p.support(), Adjacency::from_matrix({{1, 0}, {1, 1}}));
    EXPECT_EQ(params_from_json(to_json(p)), p);
}

TEST(GenerativePrior, JsonRoundTripAndStrictness) {
    GenerativePrior prior;
    EXPECT_EQ(generative_prior_from_json(to_json(prior)), prior);
    prior.scenario = ScenarioKind::Sparse;
    prior.max_in_degree = 2;
    prior.beta = DecaySpec::explicit_matrix({{1.0, 2.0}, {0.5, 1.0}});
    EXPECT_EQ(generative_prior_from_json(to_json(prior)), prior);

    EXPECT_THROW(generative_prior_from_json(Json{{"scenario", "default"}, {"m", 1}}), ValidationError);
    EXPECT_THROW(generative_prior_from_json(Json{{"scenario", "default"}, {"bogus", 1}}), ValidationError);
    EXPECT_THROW(generative_prior_from_json(Json{{"scenario", "dense"}}), ValidationError);
}

TEST(GenerativePrior, SparseDegreeMustBeBelowDimension) {
    GenerativePrior prior;
    prior.scenario = ScenarioKind::Sparse;
    prior.max_in_degree = 3;
    EXPECT_THROW(prior.validate(3), ValidationError);
    EXPECT_NO_THROW(prior.validate(4));
}

TEST(MdlScore, TotalIsSumOfParts) {
    const MdlScore s(1.5, 100.25, 0.0, 2.0);
    EXPECT_DOUBLE_EQ(s.total(), 103.75);
    EXPECT_DOUBLE_EQ(s.with_comp(3.0).total(), 104.75);
}

TEST(Luckiness, NamesRoundTrip) {
    for (auto k : {LuckinessKind::Uniform, LuckinessKind::ExpPenalty}) {
        EXPECT_EQ(parse_luckiness(to_string(k)), k);
    }
    EXPECT_THROW(parse_luckiness("gaussian"), ValidationError);
}

TEST(Digest, StableAndSensitive) {
    EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
    EXPECT_EQ(json_digest(Json{{"a", 1}}), json_digest(Json::parse("{\"a\":1}")));
    EXPECT_NE(json_digest(Json{{"a", 1}}), json_digest(Json{{"a", 2}}));
}

TEST(SeedSpec, StreamsDependOnlyOnMasterAndPath) {
    const SeedSpec a{42, {1, 2}};
    EXPECT_EQ(a.stream_seed(), (SeedSpec{42, {1, 2}}).stream_seed());
    EXPECT_NE(a.stream_seed(), (SeedSpec{42, {2, 1}}).stream_seed());
    EXPECT_NE(a.stream_seed(), (SeedSpec{43, {1, 2}}).stream_seed());
    EXPECT_NE((SeedSpec{42, {0}}).stream_seed(), (SeedSpec{42, {0, 0}}).stream_seed());
    EXPECT_EQ(a.child(3).path, (std::vector<std::uint64_t>{1, 2, 3}));
}

TEST(Rng, UniformIsOpenAndBelowIsInRange) {
    Rng rng(SeedSpec{3, {}});
    for (int k = 0; k < 100000; ++k) {
        const double u = rng.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        ASSERT_LT(rng.below(7), 7u);
    }
}
