#pragma once

// Ground-truth generation: graph, parameters, then one exp-MHP realization.

#include "hawkes_mdl/model.hpp"
#include "hawkes_mdl/rng.hpp"

#include <cstddef>
#include <stdexcept>

namespace hawkes_mdl {

/// Raised when simulation cannot produce a realization (explosive process, event cap).
class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultEventCap = 10'000'000;

Adjacency draw_graph(const GenerativePrior& prior, std::size_t dim, const SeedSpec& seed);
ExpMhpParams draw_params(const GenerativePrior& prior, const Adjacency& graph, const SeedSpec& seed);

/// Spectral radius of [alpha_ij / beta_ij].
double branching_spectral_radius(const ExpMhpParams& params);

/// Ogata thinning on [0, horizon] starting from an empty history.
EventData simulate(const ExpMhpParams& params, double horizon, const SeedSpec& seed,
                   std::size_t event_cap = kDefaultEventCap);

struct GroundTruth {
    Adjacency graph;
    ExpMhpParams params;
};

/// Draws graph then parameters, redrawing (with a fresh sub-stream) while the
/// draw is explosive. Throws SimulationError after `max_attempts` explosive draws.
GroundTruth draw_stationary_truth(const GenerativePrior& prior, std::size_t dim, const SeedSpec& seed,
                                  std::size_t max_attempts = 1000);

}  // namespace hawkes_mdl
