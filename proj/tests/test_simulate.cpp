#include "hawkes_mdl/simulate.hpp"

#include "hawkes_mdl/likelihood.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace hawkes_mdl;

namespace {

struct Moments {
    double mean = 0.0;
    double sd = 0.0;
};

Moments moments(const std::vector<double>& xs) {
    Moments m;
    m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) {
        ss += (x - m.mean) * (x - m.mean);
    }
    m.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    return m;
}

std::vector<double> replicate_counts(const ExpMhpParams& params, double horizon, std::size_t reps,
                                     std::uint64_t master) {
    std::vector<double> counts(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        counts[r] = static_cast<double>(simulate(params, horizon, SeedSpec{master, {r}}).count(0));
    }
    return counts;
}

}  // namespace

TEST(DrawGraph, ZeroEdgeProbabilityGivesIdentity) {
    GenerativePrior prior;
    prior.edge_probability = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        EXPECT_EQ(draw_graph(prior, 3, SeedSpec{s, {}}), Adjacency::identity(3));
    }
}

TEST(DrawGraph, SparseZeroDegreeGivesIdentity) {
    GenerativePrior prior;
    prior.scenario = ScenarioKind::Sparse;
    prior.max_in_degree = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        EXPECT_EQ(draw_graph(prior, 5, SeedSpec{s, {}}), Adjacency::identity(5));
    }
}

TEST(DrawGraph, WithoutSelfExcitationDiagonalIsEmpty) {
    GenerativePrior prior;
    prior.self_excite = false;
    prior.edge_probability = 1.0;
    const Adjacency a = draw_graph(prior, 4, SeedSpec{1, {}});
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            EXPECT_EQ(a.at(i, j), i != j);
        }
    }
}

TEST(DrawGraph, DefaultOffDiagonalDensityMatchesBinomial) {
    GenerativePrior prior;
    const std::size_t p = 7;
    const std::size_t draws = 10000;
    std::size_t ones = 0;
    for (std::size_t d = 0; d < draws; ++d) {
        const Adjacency a = draw_graph(prior, p, SeedSpec{99, {d}});
        for (std::size_t i = 0; i < p; ++i) {
            ASSERT_TRUE(a.at(i, i));
        }
        ones += a.count() - p;
    }
    const double cells = static_cast<double>(draws * p * (p - 1));
    const double density = static_cast<double>(ones) / cells;
    const double sigma = std::sqrt(0.3 * 0.7 / cells);
    EXPECT_NEAR(density, 0.3, 3.0 * sigma);
}

TEST(DrawGraph, SparseInDegreeIsUniformUpToBound) {
    GenerativePrior prior;
    prior.scenario = ScenarioKind::Sparse;
    prior.max_in_degree = 2;
    std::vector<std::size_t> hist(3, 0);
    for (std::size_t d = 0; d < 3000; ++d) {
        const Adjacency a = draw_graph(prior, 6, SeedSpec{5, {d}});
        for (std::size_t i = 0; i < 6; ++i) {
            ASSERT_TRUE(a.at(i, i));
            const std::size_t parents = a.row(i).count() - 1;
            ASSERT_LE(parents, 2u);
            ++hist[parents];
        }
    }
    const double n = 18000.0;
    for (std::size_t k : hist) {
        EXPECT_NEAR(static_cast<double>(k) / n, 1.0 / 3.0, 3.0 * std::sqrt((2.0 / 9.0) / n));
    }
}

TEST(DrawParams, EmptyGraphGivesZeroAlpha) {
    const ExpMhpParams p = draw_params(GenerativePrior{}, Adjacency(4), SeedSpec{1, {}});
    for (const auto& row : p.alpha()) {
        for (double a : row) {
            EXPECT_EQ(a, 0.0);
        }
    }
}

TEST(DrawParams, DefaultRangesAndSupport) {
    GenerativePrior prior;
    double sum = 0.0;
    double n = 0.0;
    for (std::size_t d = 0; d < 10000; ++d) {
        const Adjacency g = draw_graph(prior, 3, SeedSpec{17, {d, 0}});
        const ExpMhpParams p = draw_params(prior, g, SeedSpec{17, {d, 1}});
        ASSERT_EQ(p.support(), g);
        for (std::size_t i = 0; i < 3; ++i) {
            ASSERT_GE(p.mu()[i], 0.5);
            ASSERT_LE(p.mu()[i], 1.0);
            for (std::size_t j = 0; j < 3; ++j) {
                if (g.at(i, j)) {
                    ASSERT_GE(p.alpha()[i][j], 0.1);
                    ASSERT_LE(p.alpha()[i][j], 0.2);
                    sum += p.alpha()[i][j];
                    n += 1.0;
                }
                ASSERT_EQ(p.beta()[i][j], 1.0);
            }
        }
    }
    const double sigma = (0.1 / std::sqrt(12.0)) / std::sqrt(n);
    EXPECT_NEAR(sum / n, 0.15, 3.0 * sigma);
}

TEST(Simulate, ZeroIntensityGivesNoEvents) {
    const ExpMhpParams p({0.0, 0.0}, {{0.0, 0.0}, {0.0, 0.0}}, {{1.0, 1.0}, {1.0, 1.0}});
    EXPECT_EQ(simulate(p, 100.0, SeedSpec{1, {}}).total_count(), 0u);
}

TEST(Simulate, PoissonMeanCount) {
    const ExpMhpParams p({0.8}, {{0.0}}, {{1.0}});
    const Moments m = moments(replicate_counts(p, 1000.0, 200, 21));
    EXPECT_NEAR(m.mean, 800.0, 3.0 * std::sqrt(800.0 / 200.0));
}

TEST(Simulate, HawkesMeanCountFollowsBranchingRatio) {
    const ExpMhpParams p({0.5}, {{0.15}}, {{1.0}});
    const Moments m = moments(replicate_counts(p, 1000.0, 200, 22));
    const double expected = 0.5 * 1000.0 / (1.0 - 0.15);
    EXPECT_NEAR(m.mean, expected, 3.0 * m.sd / std::sqrt(200.0));
}

TEST(Simulate, InterArrivalTimesOfPoissonAreExponential) {
    const ExpMhpParams p({2.0}, {{0.0}}, {{1.0}});
    const EventData x = simulate(p, 5000.0, SeedSpec{23, {}});
    std::vector<double> gaps;
    double prev = 0.0;
    for (double t : x.events(0)) {
        gaps.push_back(t - prev);
        prev = t;
    }
    const Moments m = moments(gaps);
    EXPECT_NEAR(m.mean, 0.5, 3.0 * 0.5 / std::sqrt(static_cast<double>(gaps.size())));
    EXPECT_NEAR(m.sd, 0.5, 0.03);
}

TEST(Simulate, DeterministicAndValid) {
    GenerativePrior prior;
    const GroundTruth z = draw_stationary_truth(prior, 4, SeedSpec{8, {0}});
    const EventData a = simulate(z.params, 300.0, SeedSpec{8, {1}});
    const EventData b = simulate(z.params, 300.0, SeedSpec{8, {1}});
    EXPECT_EQ(a, b);
    EXPECT_NO_THROW(EventData::validate(a.horizon(), a.dim(), a.all_events()));
    EXPECT_NE(a, simulate(z.params, 300.0, SeedSpec{8, {2}}));

    std::vector<EventData> parallel(8);
#pragma omp parallel for
    for (int k = 0; k < 8; ++k) {
        parallel[static_cast<std::size_t>(k)] = simulate(z.params, 300.0, SeedSpec{8, {1}});
    }
    for (const auto& x : parallel) {
        EXPECT_EQ(x, a);
    }
}

TEST(Simulate, RejectsExplosiveParameters) {
    const ExpMhpParams p({0.5}, {{1.2}}, {{1.0}});
    EXPECT_GE(branching_spectral_radius(p), 1.0);
    EXPECT_THROW(simulate(p, 10.0, SeedSpec{1, {}}), SimulationError);
}

TEST(Simulate, EventCapFailsLoudly) {
    const ExpMhpParams p({50.0}, {{0.0}}, {{1.0}});
    EXPECT_THROW(simulate(p, 100.0, SeedSpec{1, {}}, 100), SimulationError);
}

TEST(Simulate, SpectralRadiusOfKnownMatrix) {
    const ExpMhpParams p({0.1, 0.1}, {{0.2, 0.3}, {0.3, 0.2}}, {{1.0, 1.0}, {1.0, 2.0}});
    // Branching matrix [[0.2, 0.3], [0.3, 0.1]] has eigenvalues 0.15 +- sqrt(0.0025 + 0.09).
    EXPECT_NEAR(branching_spectral_radius(p), 0.15 + std::sqrt(0.0925), 1e-12);
}

TEST(DrawStationaryTruth, AlwaysSubcritical) {
    GenerativePrior prior;
    prior.edge_probability = 1.0;
    prior.alpha_range = {0.15, 0.3};
    for (std::uint64_t s = 0; s < 50; ++s) {
        const GroundTruth z = draw_stationary_truth(prior, 4, SeedSpec{s, {}});
        EXPECT_LT(branching_spectral_radius(z.params), 1.0);
        EXPECT_EQ(z.params.support(), z.graph);
    }
}
