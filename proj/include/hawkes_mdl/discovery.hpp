#pragma once

// MDL causal discovery: each dimension independently picks the row pattern
// minimizing  -log pi_i(gamma_i) + nll_i(theta_hat) - log v_i(theta_hat) + COMP(gamma_i).

#include "hawkes_mdl/complexity.hpp"
#include "hawkes_mdl/estimator.hpp"
#include "hawkes_mdl/model.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hawkes_mdl {

/// Admissible row patterns of one dimension.
class ModelSpace {
public:
    /// All 2^p patterns.
    static ModelSpace full() { return ModelSpace(std::nullopt, false); }
    /// At most `max_parents` off-diagonal ones; the diagonal is forced on when `force_self`.
    static ModelSpace sparse_bounded(std::size_t max_parents, bool force_self) {
        return ModelSpace(max_parents, force_self);
    }

    bool is_full() const noexcept { return !max_parents_; }
    std::optional<std::size_t> max_parents() const noexcept { return max_parents_; }
    bool force_self() const noexcept { return force_self_; }

    /// Patterns for dimension i in lexicographic bit-string order.
    std::vector<RowPattern> enumerate(std::size_t dim, std::size_t i) const;
    std::size_t size(std::size_t dim) const;

    bool operator==(const ModelSpace&) const = default;

private:
    ModelSpace(std::optional<std::size_t> max_parents, bool force_self)
        : max_parents_(max_parents), force_self_(force_self) {}

    std::optional<std::size_t> max_parents_;
    bool force_self_ = false;
};

std::vector<std::vector<RowPattern>> enumerate_spaces(const ModelSpace& space, std::size_t dim);

/// Product prior over graphs; each factor is uniform over its model space.
class ModelPrior {
public:
    static ModelPrior uniform() { return ModelPrior(); }
    double neg_log_prob(std::size_t space_size) const;
};

/// Raised when the complexity cache lacks entries needed by discovery.
class CacheMissError : public std::invalid_argument {
public:
    CacheMissError(const std::string& message, std::vector<CacheKey> missing)
        : std::invalid_argument(message), missing_(std::move(missing)) {}
    const std::vector<CacheKey>& missing() const noexcept { return missing_; }

private:
    std::vector<CacheKey> missing_;
};

struct ScoredPattern {
    RowPattern pattern;
    MdlScore score;
    bool converged = true;
    DimParams theta_hat;

    /// Score used for selection: +infinity when the fit did not converge.
    double selection_total() const;
};

MdlScore mdl_objective_dim(const DimensionView& view, const RowPattern& gamma_i, double neg_log_prior,
                           const LuckinessSpec& v, const ComplexityEstimate& comp, const FitConfig& fit,
                           bool* converged = nullptr, DimParams* theta_hat = nullptr);

MdlScore mdl_objective_dim(const EventData& x, std::size_t i, const RowPattern& gamma_i, const Matrix& beta,
                           double neg_log_prior, const LuckinessSpec& v, const ComplexityEstimate& comp,
                           const FitConfig& fit = {});

/// Looks up COMP(gamma_i) for dimension i; nullopt signals a miss.
using ComplexityLookup = std::function<std::optional<ComplexityEstimate>(std::size_t, const RowPattern&)>;

struct DiscoverOptions {
    FitConfig fit;
    unsigned threads = 0;
    /// Processing order of dimensions; empty means 0..p-1.
    std::vector<std::size_t> order;
};

struct DiscoveryResult {
    Adjacency graph;
    std::vector<std::vector<ScoredPattern>> tables;  // per dimension, in model-space order
};

/// Smallest selection_total; ties go to fewer ones, then the lexicographically smallest pattern.
std::size_t select_pattern(const std::vector<ScoredPattern>& table);

DiscoveryResult discover(const EventData& x, const Matrix& beta, const std::vector<std::vector<RowPattern>>& spaces,
                         const ModelPrior& prior, const LuckinessSpec& v, const ComplexityLookup& comp,
                         const DiscoverOptions& options = {});

/// Cache-backed discovery. Throws CacheMissError listing every missing key.
DiscoveryResult discover(const EventData& x, const std::vector<std::vector<RowPattern>>& spaces,
                         const ModelPrior& prior, const ComplexityJobConfig& cache_cfg, const ComplexityCache& cache,
                         const DiscoverOptions& options = {});

/// Joint objective for a whole graph gamma: one optimization over every free
/// coordinate of theta, scored with the total likelihood, the product prior,
/// the product luckiness and the summed per-dimension complexities.
MdlScore mdl_objective_joint(const EventData& x, const Matrix& beta, const Adjacency& gamma,
                             const std::vector<std::size_t>& space_sizes, const ModelPrior& prior,
                             const LuckinessSpec& v, const std::vector<ComplexityEstimate>& comps,
                             const FitConfig& fit = {});

}  // namespace hawkes_mdl
