#include "hawkes_mdl/discovery.hpp"

#include "hawkes_mdl/likelihood.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <sstream>

namespace hawkes_mdl {

namespace {

double binomial(std::size_t n, std::size_t k) {
    double c = 1.0;
    for (std::size_t r = 1; r <= k; ++r) {
        c = c * static_cast<double>(n - k + r) / static_cast<double>(r);
    }
    return std::round(c);
}

void add_subsets(const std::vector<std::size_t>& others, std::size_t start, std::size_t remaining,
                 std::uint64_t bits, std::size_t dim, std::vector<RowPattern>& out) {
    out.emplace_back(dim, bits);
    if (remaining == 0) {
        return;
    }
    for (std::size_t s = start; s < others.size(); ++s) {
        add_subsets(others, s + 1, remaining - 1, bits | (std::uint64_t{1} << others[s]), dim, out);
    }
}

int thread_count(unsigned requested) {
    return requested == 0 ? omp_get_max_threads() : static_cast<int>(requested);
}

}  // namespace

std::vector<RowPattern> ModelSpace::enumerate(std::size_t dim, std::size_t i) const {
    if (dim == 0 || dim > RowPattern::kMaxDim || i >= dim) {
        throw ValidationError("model space: dimension index out of range");
    }
    std::vector<RowPattern> out;
    if (is_full()) {
        if (dim > 24) {
            throw ValidationError("full model space is limited to 24 dimensions; use a sparse-bounded space");
        }
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << dim); ++bits) {
            out.emplace_back(dim, bits);
        }
    } else {
        std::vector<std::size_t> others;
        for (std::size_t j = 0; j < dim; ++j) {
            if (j != i) {
                others.push_back(j);
            }
        }
        const std::size_t m = std::min(*max_parents_, others.size());
        const std::uint64_t self = std::uint64_t{1} << i;
        add_subsets(others, 0, m, self, dim, out);
        if (!force_self_) {
            add_subsets(others, 0, m, 0, dim, out);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t ModelSpace::size(std::size_t dim) const {
    if (is_full()) {
        return std::size_t{1} << dim;
    }
    const std::size_t m = std::min(*max_parents_, dim - 1);
    double total = 0.0;
    for (std::size_t k = 0; k <= m; ++k) {
        total += binomial(dim - 1, k);
    }
    return static_cast<std::size_t>(total) * (force_self_ ? 1 : 2);
}

std::vector<std::vector<RowPattern>> enumerate_spaces(const ModelSpace& space, std::size_t dim) {
    std::vector<std::vector<RowPattern>> out;
    out.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        out.push_back(space.enumerate(dim, i));
    }
    return out;
}

double ModelPrior::neg_log_prob(std::size_t space_size) const {
    if (space_size == 0) {
        throw ValidationError("model prior over an empty model space");
    }
    return std::log(static_cast<double>(space_size));
}

double ScoredPattern::selection_total() const {
    return converged ? score.total() : std::numeric_limits<double>::infinity();
}

MdlScore mdl_objective_dim(const DimensionView& view, const RowPattern& gamma_i, double neg_log_prior,
                           const LuckinessSpec& v, const ComplexityEstimate& comp, const FitConfig& fit,
                           bool* converged, DimParams* theta_hat) {
    const FitResult r = mdl_fit(view.masked(gamma_i), v, fit);
    if (converged) {
        *converged = r.converged;
    }
    if (theta_hat) {
        *theta_hat = r.theta_hat;
    }
    return MdlScore(neg_log_prior, r.neg_log_lik, -log_luckiness(v, r.theta_hat, gamma_i), comp.comp);
}

MdlScore mdl_objective_dim(const EventData& x, std::size_t i, const RowPattern& gamma_i, const Matrix& beta,
                           double neg_log_prior, const LuckinessSpec& v, const ComplexityEstimate& comp,
                           const FitConfig& fit) {
    if (i >= x.dim() || beta.size() != x.dim()) {
        throw ValidationError("dimension index or decay matrix does not match the data");
    }
    return mdl_objective_dim(DimensionView(x, i, beta[i]), gamma_i, neg_log_prior, v, comp, fit);
}

std::size_t select_pattern(const std::vector<ScoredPattern>& table) {
    if (table.empty()) {
        throw ValidationError("cannot select from an empty model space");
    }
    std::size_t best = 0;
    for (std::size_t q = 1; q < table.size(); ++q) {
        const double a = table[q].selection_total();
        const double b = table[best].selection_total();
        if (a < b) {
            best = q;
        } else if (a == b) {
            const auto ca = table[q].pattern.count();
            const auto cb = table[best].pattern.count();
            if (ca < cb || (ca == cb && table[q].pattern < table[best].pattern)) {
                best = q;
            }
        }
    }
    return best;
}

DiscoveryResult discover(const EventData& x, const Matrix& beta, const std::vector<std::vector<RowPattern>>& spaces,
                         const ModelPrior& prior, const LuckinessSpec& v, const ComplexityLookup& comp,
                         const DiscoverOptions& options) {
    const std::size_t dim = x.dim();
    if (spaces.size() != dim || beta.size() != dim) {
        throw ValidationError("discovery needs one model space and one decay row per dimension");
    }
    std::vector<std::size_t> order = options.order;
    if (order.empty()) {
        order.resize(dim);
        std::iota(order.begin(), order.end(), 0);
    }
    {
        auto sorted = order;
        std::sort(sorted.begin(), sorted.end());
        std::vector<std::size_t> expected(dim);
        std::iota(expected.begin(), expected.end(), 0);
        if (sorted != expected) {
            throw ValidationError("dimension order must be a permutation of 0..p-1");
        }
    }

    DiscoveryResult result;
    result.tables.resize(dim);
    struct Task {
        std::size_t dim_index;
        std::size_t slot;
        ComplexityEstimate comp;
    };
    std::vector<Task> tasks;
    for (std::size_t i : order) {
        if (spaces[i].empty()) {
            std::ostringstream os;
            os << "model space of dimension " << i << " is empty";
            throw ValidationError(os.str());
        }
        result.tables[i].resize(spaces[i].size());
        for (std::size_t q = 0; q < spaces[i].size(); ++q) {
            auto c = comp(i, spaces[i][q]);
            if (!c) {
                std::ostringstream os;
                os << "no complexity estimate for dimension " << i << ", pattern " << spaces[i][q].to_string();
                throw CacheMissError(os.str(), {});
            }
            tasks.push_back({i, q, *c});
        }
    }

    std::vector<DimensionView> views;
    views.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        views.emplace_back(x, i, beta[i]);
    }
    std::vector<std::exception_ptr> errors(tasks.size());

#pragma omp parallel for schedule(dynamic) num_threads(thread_count(options.threads))
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        try {
            const Task& task = tasks[t];
            const std::size_t i = task.dim_index;
            ScoredPattern& entry = result.tables[i][task.slot];
            entry.pattern = spaces[i][task.slot];
            entry.score = mdl_objective_dim(views[i], entry.pattern, prior.neg_log_prob(spaces[i].size()), v,
                                            task.comp, options.fit, &entry.converged, &entry.theta_hat);
        } catch (...) {
            errors[t] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    std::vector<RowPattern> rows(dim);
    for (std::size_t i : order) {
        rows[i] = result.tables[i][select_pattern(result.tables[i])].pattern;
    }
    result.graph = Adjacency(std::move(rows));
    return result;
}

DiscoveryResult discover(const EventData& x, const std::vector<std::vector<RowPattern>>& spaces,
                         const ModelPrior& prior, const ComplexityJobConfig& cache_cfg, const ComplexityCache& cache,
                         const DiscoverOptions& options) {
    if (cache_cfg.dim != x.dim()) {
        std::ostringstream os;
        os << "complexity configuration is for dimension " << cache_cfg.dim << " but the data has " << x.dim();
        throw ValidationError(os.str());
    }
    if (spaces.size() != x.dim()) {
        throw ValidationError("discovery needs one model space per dimension");
    }
    std::vector<CacheKey> missing = missing_keys(cache_cfg, spaces, cache);
    if (!missing.empty()) {
        std::ostringstream os;
        os << "complexity cache is missing " << missing.size() << " entries:";
        for (const auto& key : missing) {
            os << " (i=" << key.dim_index << ", pattern=" << key.pattern.to_string() << ")";
        }
        throw CacheMissError(os.str(), std::move(missing));
    }
    ComplexityLookup lookup = [&](std::size_t i, const RowPattern& pattern) {
        return cache.find(make_cache_key(cache_cfg, i, pattern));
    };
    return discover(x, cache_cfg.beta(), spaces, prior, cache_cfg.luckiness, lookup, options);
}

MdlScore mdl_objective_joint(const EventData& x, const Matrix& beta, const Adjacency& gamma,
                             const std::vector<std::size_t>& space_sizes, const ModelPrior& prior,
                             const LuckinessSpec& v, const std::vector<ComplexityEstimate>& comps,
                             const FitConfig& fit) {
    const std::size_t dim = x.dim();
    if (gamma.dim() != dim || beta.size() != dim || space_sizes.size() != dim || comps.size() != dim) {
        throw ValidationError("joint objective inputs must all match the data dimension");
    }
    std::vector<DimensionView> views;
    std::vector<std::size_t> offset(dim + 1, 0);
    for (std::size_t i = 0; i < dim; ++i) {
        views.push_back(DimensionView(x, i, beta[i]).masked(gamma.row(i)));
        offset[i + 1] = offset[i] + 1 + gamma.row(i).count();
    }
    const bool penalized = v.kind == LuckinessKind::ExpPenalty;

    std::vector<DimParams> theta(dim, DimParams{0.0, std::vector<double>(dim, 0.0)});
    auto unpack = [&](std::span<const double> z) {
        for (std::size_t i = 0; i < dim; ++i) {
            theta[i].mu = z[offset[i]];
            std::size_t c = offset[i] + 1;
            for (std::size_t j : gamma.row(i).members()) {
                theta[i].alpha[j] = z[c++];
            }
        }
    };
    ConeObjective objective;
    objective.value = [&](std::span<const double> z) {
        unpack(z);
        double total = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            total += nll_dim(theta[i], views[i]);
        }
        if (penalized) {
            total += std::accumulate(z.begin(), z.end(), 0.0);
        }
        return total;
    };
    objective.gradient = [&](std::span<const double> z, std::span<double> out) {
        unpack(z);
        for (std::size_t i = 0; i < dim; ++i) {
            const auto g = nll_grad_dim(theta[i], views[i]);
            for (std::size_t c = 0; c < g.size(); ++c) {
                out[offset[i] + c] = g[c] + (penalized ? 1.0 : 0.0);
            }
        }
    };

    std::vector<double> start(offset[dim], 0.01);
    for (std::size_t i = 0; i < dim; ++i) {
        start[offset[i]] = static_cast<double>(views[i].n_events()) / (2.0 * x.horizon()) + 1e-3;
    }
    const ConeSolution sol = minimize_on_cone(objective, std::move(start), fit);
    if (!sol.converged) {
        throw ConvergenceError("joint MDL fit did not converge");
    }
    unpack(sol.point);

    std::vector<double> mu(dim);
    Matrix alpha(dim);
    double neg_log_prior = 0.0;
    double neg_log_luck = 0.0;
    double comp = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        mu[i] = theta[i].mu;
        alpha[i] = theta[i].alpha;
        neg_log_prior += prior.neg_log_prob(space_sizes[i]);
        neg_log_luck -= log_luckiness(v, theta[i], gamma.row(i));
        comp += comps[i].comp;
    }
    const double neg_log_lik = nll_total(ExpMhpParams(std::move(mu), std::move(alpha), beta), x);
    return MdlScore(neg_log_prior, neg_log_lik, neg_log_luck, comp);
}

}  // namespace hawkes_mdl
