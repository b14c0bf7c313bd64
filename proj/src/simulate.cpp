#include "hawkes_mdl/simulate.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numeric>
#include <sstream>

namespace hawkes_mdl {

Adjacency draw_graph(const GenerativePrior& prior, std::size_t dim, const SeedSpec& seed) {
    prior.validate(dim);
    Rng rng(seed);
    Adjacency graph(dim);
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < dim; ++i) {
        if (prior.self_excite) {
            graph.set(i, i, true);
        }
        if (prior.scenario == ScenarioKind::Default) {
            for (std::size_t j = 0; j < dim; ++j) {
                if (j != i && rng.bernoulli(prior.edge_probability)) {
                    graph.set(i, j, true);
                }
            }
            continue;
        }
        const std::size_t k = rng.below(prior.max_in_degree + 1);
        others.clear();
        for (std::size_t j = 0; j < dim; ++j) {
            if (j != i) {
                others.push_back(j);
            }
        }
        // Partial Fisher-Yates: the first k slots are a uniform k-subset.
        for (std::size_t s = 0; s < k; ++s) {
            const std::size_t pick = s + rng.below(others.size() - s);
            std::swap(others[s], others[pick]);
            graph.set(i, others[s], true);
        }
    }
    return graph;
}

ExpMhpParams draw_params(const GenerativePrior& prior, const Adjacency& graph, const SeedSpec& seed) {
    const std::size_t dim = graph.dim();
    prior.validate(dim);
    Rng rng(seed);
    std::vector<double> mu(dim);
    Matrix alpha(dim, std::vector<double>(dim, 0.0));
    for (std::size_t i = 0; i < dim; ++i) {
        mu[i] = rng.uniform(prior.mu_range.lo, prior.mu_range.hi);
        for (std::size_t j = 0; j < dim; ++j) {
            if (graph.at(i, j)) {
                alpha[i][j] = rng.uniform(prior.alpha_range.lo, prior.alpha_range.hi);
            }
        }
    }
    return ExpMhpParams(std::move(mu), std::move(alpha), prior.beta.matrix(dim));
}

double branching_spectral_radius(const ExpMhpParams& params) {
    const auto dim = static_cast<Eigen::Index>(params.dim());
    Eigen::MatrixXd ratio(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            ratio(i, j) = params.alpha()[i][j] / params.beta()[i][j];
        }
    }
    return ratio.eigenvalues().cwiseAbs().maxCoeff();
}

EventData simulate(const ExpMhpParams& params, double horizon, const SeedSpec& seed, std::size_t event_cap) {
    if (!std::isfinite(horizon) || horizon <= 0.0) {
        throw ValidationError("simulation horizon must be finite and positive");
    }
    const std::size_t dim = params.dim();
    const double radius = branching_spectral_radius(params);
    if (radius >= 1.0) {
        std::ostringstream os;
        os << "explosive parameters: spectral radius of alpha/beta is " << radius << " (must be < 1)";
        throw SimulationError(os.str());
    }

    const auto& mu = params.mu();
    const auto& alpha = params.alpha();
    const auto& beta = params.beta();

    Rng rng(seed);
    std::vector<std::vector<double>> events(dim);
    // excitation[i][j]: current contribution of dimension j's past to lambda_i.
    Matrix excitation(dim, std::vector<double>(dim, 0.0));
    std::vector<double> lambda(dim);
    std::size_t accepted = 0;
    double now = 0.0;

    for (;;) {
        // Intensities only decay between events, so the current total bounds the future.
        double bound = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            bound += mu[i] + std::accumulate(excitation[i].begin(), excitation[i].end(), 0.0);
        }
        if (bound <= 0.0) {
            break;
        }
        const double wait = rng.exponential(bound);
        const double candidate = now + wait;
        if (candidate > horizon) {
            break;
        }
        double total = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            double li = mu[i];
            for (std::size_t j = 0; j < dim; ++j) {
                excitation[i][j] *= std::exp(-beta[i][j] * wait);
                li += excitation[i][j];
            }
            lambda[i] = li;
            total += li;
        }
        if (total > bound * (1.0 + 1e-9)) {
            throw std::logic_error("thinning bound violated: intensity exceeds the candidate upper bound");
        }
        const bool advanced = candidate > now;
        now = candidate;
        if (!advanced || rng.uniform() * bound > total) {
            continue;
        }
        double target = rng.uniform() * total;
        std::size_t d = 0;
        while (d + 1 < dim && target >= lambda[d]) {
            target -= lambda[d];
            ++d;
        }
        events[d].push_back(candidate);
        if (++accepted > event_cap) {
            std::ostringstream os;
            os << "event-count safety cap of " << event_cap << " exceeded";
            throw SimulationError(os.str());
        }
        for (std::size_t i = 0; i < dim; ++i) {
            excitation[i][d] += alpha[i][d];
        }
    }
    return EventData::validate(horizon, dim, std::move(events));
}

GroundTruth draw_stationary_truth(const GenerativePrior& prior, std::size_t dim, const SeedSpec& seed,
                                  std::size_t max_attempts) {
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
        const SeedSpec s = seed.child(attempt);
        Adjacency graph = draw_graph(prior, dim, s.child(0));
        ExpMhpParams params = draw_params(prior, graph, s.child(1));
        if (branching_spectral_radius(params) < 1.0) {
            return {std::move(graph), std::move(params)};
        }
    }
    throw SimulationError("generative prior produced only explosive parameter draws");
}

}  // namespace hawkes_mdl
