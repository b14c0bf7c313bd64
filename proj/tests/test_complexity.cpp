#include "hawkes_mdl/complexity.hpp"

#include "hawkes_mdl/discovery.hpp"
#include "hawkes_mdl/likelihood.hpp"
#include "hawkes_mdl/simulate.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

using namespace hawkes_mdl;

namespace {

ComplexityJobConfig small_config(std::size_t dim, std::size_t n) {
    ComplexityJobConfig cfg;
    cfg.dim = dim;
    cfg.horizon = 100.0;
    cfg.n_samples = n;
    cfg.seed = 2024;
    cfg.retain_log_q = true;
    return cfg;
}

std::filesystem::path temp_file(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "hawkes_mdl_tests";
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::filesystem::remove(path);
    return path;
}

}  // namespace

TEST(SummarizeLogQ, SingleSampleIsExact) {
    const std::vector<double> one{3.25};
    const ComplexityEstimate est = summarize_log_q(one);
    EXPECT_EQ(est.comp, 3.25);
    EXPECT_EQ(est.std_error, 0.0);
    EXPECT_EQ(est.n_samples, 1u);
}

TEST(SummarizeLogQ, LogMeanExpIsStableForHugeValues) {
    const std::vector<double> big{1000.0, 1000.0 + std::log(3.0)};
    const ComplexityEstimate est = summarize_log_q(big);
    EXPECT_NEAR(est.comp, 1000.0 + std::log(2.0), 1e-12);
    // Q values 1 and 3 (times e^1000): sd = sqrt(2), mean = 2, so stderr = sqrt(2) / (2 sqrt(2)).
    EXPECT_NEAR(est.std_error, 0.5, 1e-12);
}

TEST(SummarizeLogQ, RejectsEmptyAndNonFinite) {
    EXPECT_THROW(summarize_log_q(std::vector<double>{}), ValidationError);
    EXPECT_THROW(summarize_log_q(std::vector<double>{std::numeric_limits<double>::infinity()}), std::domain_error);
}

TEST(EstimateComp, SingleSampleEqualsItsLogQ) {
    const ComplexityEstimate est = estimate_comp(RowPattern::parse("110"), 0, small_config(3, 1));
    ASSERT_EQ(est.log_q.size(), 1u);
    EXPECT_EQ(est.comp, est.log_q[0]);
}

TEST(EstimateComp, FittedObjectiveBeatsProjectedTruthPerSample) {
    const ComplexityJobConfig cfg = small_config(3, 20);
    const RowPattern gamma = RowPattern::parse("101");
    const ComplexityEstimate est = estimate_comp(gamma, 1, cfg);
    for (std::size_t k = 0; k < cfg.n_samples; ++k) {
        const SeedSpec seed = complexity_sample_seed(cfg.seed, k);
        const GroundTruth z = draw_stationary_truth(cfg.prior, cfg.dim, seed.child(0));
        const EventData s = simulate(z.params, cfg.horizon, seed.child(1));
        const DimensionView view(s, 1, cfg.beta()[1]);
        DimParams proj = z.params.row(1);
        for (std::size_t j = 0; j < 3; ++j) {
            if (!gamma.test(j)) {
                proj.alpha[j] = 0.0;
            }
        }
        const double bound = nll_dim(z.params.row(1), view) - nll_dim(proj, view);
        EXPECT_GE(est.log_q[k], bound - 1e-6);
    }
}

TEST(EstimateComp, NestedPatternsAreMonotonePerSample) {
    const ComplexityJobConfig cfg = small_config(3, 25);
    std::vector<ComplexityJob> jobs;
    for (std::uint64_t b = 0; b < 8; ++b) {
        jobs.push_back({2, RowPattern(3, b)});
    }
    const auto est = estimate_comp_batch(jobs, cfg);
    for (std::size_t a = 0; a < jobs.size(); ++a) {
        for (std::size_t b = 0; b < jobs.size(); ++b) {
            if (!jobs[a].pattern.subset_of(jobs[b].pattern)) {
                continue;
            }
            for (std::size_t k = 0; k < cfg.n_samples; ++k) {
                EXPECT_LE(est[a].log_q[k], est[b].log_q[k] + 1e-6);
            }
            EXPECT_LE(est[a].comp, est[b].comp + 1e-6);
        }
    }
}

TEST(EstimateComp, BatchEqualsSingleAndIgnoresThreadCount) {
    ComplexityJobConfig cfg = small_config(2, 16);
    const std::vector<ComplexityJob> jobs{{0, RowPattern::parse("10")}, {1, RowPattern::parse("11")}};
    cfg.threads = 1;
    const auto serial = estimate_comp_batch(jobs, cfg);
    cfg.threads = 4;
    const auto parallel = estimate_comp_batch(jobs, cfg);
    for (std::size_t q = 0; q < jobs.size(); ++q) {
        EXPECT_EQ(serial[q].comp, parallel[q].comp);
        EXPECT_EQ(serial[q].std_error, parallel[q].std_error);
        EXPECT_EQ(serial[q].log_q, parallel[q].log_q);
        EXPECT_EQ(estimate_comp(jobs[q].pattern, jobs[q].dim_index, cfg).comp, serial[q].comp);
    }
}

TEST(EstimateComp, RejectsInvalidConfig) {
    ComplexityJobConfig cfg = small_config(2, 0);
    EXPECT_THROW(estimate_comp(RowPattern::full(2), 0, cfg), ValidationError);
    cfg = small_config(2, 4);
    cfg.prior.mu_range = {0.0, 1.0};
    EXPECT_THROW(estimate_comp(RowPattern::full(2), 0, cfg), ValidationError);
    cfg = small_config(2, 4);
    EXPECT_THROW(estimate_comp(RowPattern::full(3), 0, cfg), ValidationError);
}

TEST(CacheKey, JsonRoundTripAndSensitivity) {
    const ComplexityJobConfig cfg = small_config(3, 10);
    const CacheKey key = make_cache_key(cfg, 1, RowPattern::parse("011"));
    EXPECT_EQ(CacheKey::from_json(key.to_json()).canonical(), key.canonical());

    ComplexityJobConfig other = cfg;
    other.seed += 1;
    EXPECT_NE(make_cache_key(other, 1, RowPattern::parse("011")).canonical(), key.canonical());
    other = cfg;
    other.prior.beta = DecaySpec::constant(2.0);
    EXPECT_NE(make_cache_key(other, 1, RowPattern::parse("011")).canonical(), key.canonical());
    other = cfg;
    other.luckiness.kind = LuckinessKind::ExpPenalty;
    EXPECT_NE(make_cache_key(other, 1, RowPattern::parse("011")).canonical(), key.canonical());
    other = cfg;
    other.threads = 7;
    EXPECT_EQ(make_cache_key(other, 1, RowPattern::parse("011")).canonical(), key.canonical());
}

TEST(PrecomputeCache, FullSpaceCountsAndFileRoundTrip) {
    ComplexityJobConfig cfg = small_config(3, 4);
    cfg.retain_log_q = false;
    const auto spaces = enumerate_spaces(ModelSpace::full(), 3);
    const auto path = temp_file("full.jsonl");
    ComplexityCache cache;
    cache.attach(path);
    EXPECT_EQ(precompute_cache(cfg, spaces, cache), 24u);
    EXPECT_EQ(cache.size(), 24u);
    EXPECT_TRUE(missing_keys(cfg, spaces, cache).empty());

    const ComplexityCache loaded = ComplexityCache::load(path);
    EXPECT_EQ(loaded.size(), 24u);
    for (std::size_t i = 0; i < 3; ++i) {
        for (const auto& gamma : spaces[i]) {
            const auto key = make_cache_key(cfg, i, gamma);
            EXPECT_EQ(loaded.find(key)->comp, cache.find(key)->comp);
        }
    }

    // Rerunning on a fresh cache reproduces the file byte for byte.
    const auto again = temp_file("full_again.jsonl");
    ComplexityCache fresh;
    fresh.attach(again);
    precompute_cache(cfg, spaces, fresh);
    std::ifstream a(path);
    std::ifstream b(again);
    const std::string sa((std::istreambuf_iterator<char>(a)), {});
    const std::string sb((std::istreambuf_iterator<char>(b)), {});
    EXPECT_EQ(sa, sb);

    // Resuming computes nothing new.
    ComplexityCache resumed = ComplexityCache::load(path);
    EXPECT_EQ(precompute_cache(cfg, spaces, resumed), 0u);
}

TEST(PrecomputeCache, MissingKeysAreReported) {
    ComplexityJobConfig cfg = small_config(2, 3);
    const auto spaces = enumerate_spaces(ModelSpace::full(), 2);
    ComplexityCache cache;
    cache.insert(make_cache_key(cfg, 0, RowPattern::parse("00")), ComplexityEstimate{});
    EXPECT_EQ(missing_keys(cfg, spaces, cache).size(), 7u);
}

TEST(ComplexityCache, RejectsMalformedLines) {
    const auto path = temp_file("bad.jsonl");
    std::ofstream(path) << "{\"key\": {}, \"comp\": 1}\n";
    EXPECT_THROW(ComplexityCache::load(path), ValidationError);
    EXPECT_THROW(ComplexityCache::load(temp_file("absent.jsonl")), ValidationError);
}
