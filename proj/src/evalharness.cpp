#include "hawkes_mdl/evalharness.hpp"

#include "hawkes_mdl/simulate.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace hawkes_mdl {

namespace {

constexpr std::uint64_t kTrialStreamTag = 0x5452494c;  // "TRIL"

std::pair<double, double> mean_and_stderr(const std::vector<double>& values) {
    if (values.empty()) {
        return {0.0, 0.0};
    }
    const auto n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() < 2) {
        return {mean, 0.0};
    }
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

double f1(const Adjacency& pred, const Adjacency& truth, const F1Options& options) {
    if (pred.dim() != truth.dim()) {
        throw ValidationError("F1 needs adjacency matrices of the same dimension");
    }
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    for (std::size_t i = 0; i < truth.dim(); ++i) {
        for (std::size_t j = 0; j < truth.dim(); ++j) {
            if (i == j && !options.include_diagonal) {
                continue;
            }
            const bool p = pred.at(i, j);
            const bool t = truth.at(i, j);
            tp += p && t;
            fp += p && !t;
            fn += !p && t;
        }
    }
    if (tp + fp + fn == 0) {
        return 1.0;
    }
    return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

double random_baseline_f1(const Adjacency& truth, const SeedSpec& seed, const F1Options& options) {
    const std::size_t dim = truth.dim();
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    std::size_t ones = 0;
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            if (i == j && !options.include_diagonal) {
                continue;
            }
            cells.emplace_back(i, j);
            ones += truth.at(i, j);
        }
    }
    Rng rng(seed);
    Adjacency random(dim);
    for (std::size_t s = 0; s < ones; ++s) {
        const std::size_t pick = s + rng.below(cells.size() - s);
        std::swap(cells[s], cells[pick]);
        random.set(cells[s].first, cells[s].second, true);
    }
    return f1(random, truth, options);
}

void BenchmarkConfig::validate() const {
    complexity.validate();
    if (n_trials < 1) {
        throw ValidationError("benchmark needs at least one trial");
    }
}

BenchmarkConfig desk_scale_config() {
    BenchmarkConfig cfg;
    cfg.complexity.dim = 4;
    cfg.complexity.horizon = 400.0;
    cfg.complexity.n_samples = 200;
    cfg.complexity.seed = 1;
    cfg.n_trials = 20;
    return cfg;
}

BenchmarkConfig paper_scale_config() {
    BenchmarkConfig cfg = desk_scale_config();
    cfg.complexity.dim = 7;
    cfg.complexity.n_samples = 1000;
    cfg.n_trials = 100;
    return cfg;
}

SeedSpec trial_seed(std::uint64_t master, std::size_t trial) { return SeedSpec{master, {kTrialStreamTag, trial}}; }

BenchmarkReport run_benchmark(const BenchmarkConfig& cfg, const ComplexityCache& cache) {
    cfg.validate();
    const auto& cc = cfg.complexity;
    const auto spaces = enumerate_spaces(cfg.space, cc.dim);
    BenchmarkReport report;
    report.trials.resize(cfg.n_trials);
    const int threads = cfg.threads == 0 ? omp_get_max_threads() : static_cast<int>(cfg.threads);

#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::size_t t = 0; t < cfg.n_trials; ++t) {
        TrialResult& row = report.trials[t];
        row.trial = t;
        const SeedSpec seed = trial_seed(cc.seed, t);
        row.seed = seed.stream_seed();
        try {
            const GroundTruth truth = draw_stationary_truth(cc.prior, cc.dim, seed.child(0));
            const EventData x = simulate(truth.params, cc.horizon, seed.child(1));
            DiscoverOptions options;
            options.fit = cc.fit;
            options.threads = 1;
            const auto start = std::chrono::steady_clock::now();
            const DiscoveryResult found = discover(x, spaces, cfg.model_prior, cc, cache, options);
            row.discovery_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            row.truth = truth.graph;
            row.predicted = found.graph;
            row.f1 = f1(found.graph, truth.graph);
            row.random_f1 = random_baseline_f1(truth.graph, seed.child(2));
            row.ok = true;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    }
    report.summary = summarize(report.trials);
    return report;
}

BenchmarkSummary summarize(const std::vector<TrialResult>& trials) {
    BenchmarkSummary s;
    s.n_trials = trials.size();
    std::vector<double> f;
    std::vector<double> r;
    for (const auto& t : trials) {
        if (!t.ok) {
            ++s.n_failed;
            continue;
        }
        f.push_back(t.f1);
        r.push_back(t.random_f1);
    }
    std::tie(s.mean_f1, s.stderr_f1) = mean_and_stderr(f);
    std::tie(s.mean_random_f1, s.stderr_random_f1) = mean_and_stderr(r);
    return s;
}

std::string results_csv(const std::vector<TrialResult>& trials, const std::optional<Provenance>& provenance) {
    std::ostringstream os;
    if (provenance) {
        os << "# config_digest=" << provenance->config_digest << " seed=" << provenance->seed << '\n';
    }
    os << "trial,seed,f1,random_f1,discovery_seconds\n";
    for (const auto& t : trials) {
        os << t.trial << ',' << t.seed << ',';
        if (t.ok) {
            os << format_double(t.f1) << ',' << format_double(t.random_f1) << ',' << t.discovery_seconds;
        } else {
            os << "nan,nan,nan";
        }
        os << '\n';
    }
    return os.str();
}

Json summary_json(const BenchmarkSummary& summary, const BenchmarkConfig& cfg,
                  const std::optional<Provenance>& provenance) {
    Json j{{"mean_f1", summary.mean_f1},
           {"stderr_f1", summary.stderr_f1},
           {"mean_random_f1", summary.mean_random_f1},
           {"stderr_random_f1", summary.stderr_random_f1},
           {"n_trials", summary.n_trials},
           {"n_failed", summary.n_failed},
           {"dim", cfg.complexity.dim},
           {"horizon", cfg.complexity.horizon},
           {"n_samples", cfg.complexity.n_samples}};
    if (provenance) {
        j["provenance"] = to_json(*provenance);
    }
    return j;
}

}  // namespace hawkes_mdl
