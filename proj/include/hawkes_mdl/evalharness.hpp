#pragma once

// Synthetic evaluation: draw ground truth, simulate, discover, score with F1.

#include "hawkes_mdl/complexity.hpp"
#include "hawkes_mdl/discovery.hpp"
#include "hawkes_mdl/io.hpp"
#include "hawkes_mdl/model.hpp"
#include "hawkes_mdl/rng.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hawkes_mdl {

struct F1Options {
    bool include_diagonal = true;
};

/// 2 TP / (2 TP + FP + FN) over the adjacency entries; 1.0 when neither matrix has a positive.
double f1(const Adjacency& pred, const Adjacency& truth, const F1Options& options = {});

/// F1 of a uniformly random matrix with as many ones as `truth`.
double random_baseline_f1(const Adjacency& truth, const SeedSpec& seed, const F1Options& options = {});

struct BenchmarkConfig {
    ComplexityJobConfig complexity;  // dim, horizon, generative prior, luckiness, N, master seed, fit
    ModelSpace space = ModelSpace::sparse_bounded(RowPattern::kMaxDim, true);
    ModelPrior model_prior = ModelPrior::uniform();
    std::size_t n_trials = 20;
    unsigned threads = 0;

    void validate() const;
};

/// Desk-scale defaults: p = 4, T = 400, Default r = 0.3 with self-loops, N = 200, 20 trials.
BenchmarkConfig desk_scale_config();
/// Published protocol scale: p = 7, N = 1000, 100 trials. Long-running.
BenchmarkConfig paper_scale_config();

SeedSpec trial_seed(std::uint64_t master, std::size_t trial);

struct TrialResult {
    std::size_t trial = 0;
    std::uint64_t seed = 0;  // stream seed of the trial
    double f1 = 0.0;
    double random_f1 = 0.0;
    double discovery_seconds = 0.0;
    bool ok = false;
    std::string error;
    Adjacency truth;
    Adjacency predicted;
};

struct BenchmarkSummary {
    std::size_t n_trials = 0;
    std::size_t n_failed = 0;
    double mean_f1 = 0.0;
    double stderr_f1 = 0.0;
    double mean_random_f1 = 0.0;
    double stderr_random_f1 = 0.0;
};

struct BenchmarkReport {
    std::vector<TrialResult> trials;
    BenchmarkSummary summary;
};

/// Runs every trial; a failing trial is recorded and the rest continue.
BenchmarkReport run_benchmark(const BenchmarkConfig& cfg, const ComplexityCache& cache);

BenchmarkSummary summarize(const std::vector<TrialResult>& trials);

/// CSV with columns trial,seed,f1,random_f1,discovery_seconds (plus a provenance comment line).
std::string results_csv(const std::vector<TrialResult>& trials, const std::optional<Provenance>& provenance);
Json summary_json(const BenchmarkSummary& summary, const BenchmarkConfig& cfg,
                  const std::optional<Provenance>& provenance);

}  // namespace hawkes_mdl
