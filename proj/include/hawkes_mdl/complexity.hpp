#pragma once

// Monte-Carlo estimation of the per-dimension model complexity
//
//   COMP(M_{gamma_i}; v) = log E_{z ~ p(theta), s ~ p(.|z)} [ Q(s, z) ],
//   log Q = -nll_i(theta_hat(s); s) + log v_i(theta_hat(s)) + nll_i(z_i; s),
//
// and the on-disk cache that amortizes it across discovery queries.

#include "hawkes_mdl/estimator.hpp"
#include "hawkes_mdl/io.hpp"
#include "hawkes_mdl/model.hpp"
#include "hawkes_mdl/rng.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hawkes_mdl {

inline constexpr int kCacheSchemaVersion = 1;

struct ComplexityJobConfig {
    std::size_t dim = 0;
    double horizon = 0.0;
    GenerativePrior prior;  // z ~ p(theta); its decay matrix is the known beta
    LuckinessSpec luckiness;
    std::size_t n_samples = 1000;
    std::uint64_t seed = 0;
    FitConfig fit;
    bool retain_log_q = false;
    unsigned threads = 0;  // 0: OpenMP default
    double max_failure_fraction = 0.01;

    void validate() const;
    Matrix beta() const { return prior.beta.matrix(dim); }
};

/// Sample k's (z_k, s_k) stream. It depends on (seed, k) only, so every
/// (dimension, pattern) job sees the same draws (common random numbers).
SeedSpec complexity_sample_seed(std::uint64_t master, std::size_t k);

struct ComplexityJob {
    std::size_t dim_index = 0;
    RowPattern pattern;
};

/// Thrown when more than the allowed fraction of inner fits fail to converge.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// log-mean-exp of the samples and its delta-method standard error sd(Q) / (mean(Q) sqrt(N)).
ComplexityEstimate summarize_log_q(std::span<const double> log_q);

ComplexityEstimate estimate_comp(const RowPattern& gamma_i, std::size_t i, const ComplexityJobConfig& cfg);

/// Estimates several jobs over one shared set of N simulated samples.
std::vector<ComplexityEstimate> estimate_comp_batch(std::span<const ComplexityJob> jobs,
                                                    const ComplexityJobConfig& cfg);

struct CacheKey {
    int schema = kCacheSchemaVersion;
    std::size_t dim = 0;
    double horizon = 0.0;
    std::string beta_digest;
    LuckinessKind luckiness = LuckinessKind::Uniform;
    std::string prior_digest;
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
    std::size_t dim_index = 0;
    RowPattern pattern;

    Json to_json() const;
    static CacheKey from_json(const Json& j);
    /// Compact sorted-key serialization; equal keys have equal canonical text.
    std::string canonical() const { return to_json().dump(); }
};

CacheKey make_cache_key(const ComplexityJobConfig& cfg, std::size_t i, const RowPattern& gamma_i);

/// Exact-match map from CacheKey to ComplexityEstimate, persisted as JSON lines
/// {"key": {...}, "comp": x, "stderr": s, "n": N}.
class ComplexityCache {
public:
    ComplexityCache() = default;

    static ComplexityCache load(const std::filesystem::path& path);

    bool contains(const CacheKey& key) const { return entries_.count(key.canonical()) != 0; }
    std::optional<ComplexityEstimate> find(const CacheKey& key) const;
    /// Inserts in memory and, when attached to a file, appends one record.
    void insert(const CacheKey& key, const ComplexityEstimate& est);
    std::size_t size() const noexcept { return entries_.size(); }

    /// Subsequent inserts are appended to `path`.
    void attach(const std::filesystem::path& path) { path_ = path; }
    const std::optional<std::filesystem::path>& path() const noexcept { return path_; }

    static std::string record_line(const CacheKey& key, const ComplexityEstimate& est);

private:
    std::map<std::string, ComplexityEstimate> entries_;
    std::optional<std::filesystem::path> path_;
};

/// Keys of `spaces` absent from `cache`, in dimension then model-space order.
std::vector<CacheKey> missing_keys(const ComplexityJobConfig& cfg, const std::vector<std::vector<RowPattern>>& spaces,
                                   const ComplexityCache& cache);

/// Fills `cache` with an estimate for every (i, pattern) in `spaces[i]` that it
/// lacks. Dimensions are processed in index order and each dimension's
/// records are appended once its batch finishes, so an interrupted run resumes
/// by skipping present keys. Returns the number of new entries.
std::size_t precompute_cache(const ComplexityJobConfig& cfg, const std::vector<std::vector<RowPattern>>& spaces,
                             ComplexityCache& cache);

}  // namespace hawkes_mdl
