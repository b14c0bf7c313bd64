#pragma once

// Command-line front end: simulate, nll, precompute, discover, benchmark, ingest.

#include "hawkes_mdl/complexity.hpp"
#include "hawkes_mdl/discovery.hpp"
#include "hawkes_mdl/estimator.hpp"
#include "hawkes_mdl/io.hpp"
#include "hawkes_mdl/model.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hawkes_mdl::cli {

/// Structured run configuration. Parsing is strict: unknown keys are rejected.
///
/// {
///   "dim": 4, "horizon": 400, "seed": 7, "n_samples": 200, "trials": 20,
///   "generative_prior": {"scenario": "default", "r": 0.3, "alpha_range": [0.1, 0.2],
///                        "mu_range": [0.5, 1.0], "beta": 1.0, "self_excite": true},
///   "model_prior": "uniform",
///   "luckiness": "uniform",
///   "model_space": {"kind": "sparse_bounded", "max_parents": 3, "force_self": true},
///   "fit": {"tol": 1e-8, "max_iter": 2000}
/// }
struct RunConfig {
    std::optional<std::size_t> dim;
    std::optional<double> horizon;
    std::uint64_t seed = 0;
    std::size_t n_samples = 1000;
    std::size_t trials = 20;
    GenerativePrior prior;
    LuckinessSpec luckiness;
    // Model space: full when max_parents is unset and force_self is false.
    std::string space_kind = "sparse_bounded";
    std::optional<std::size_t> max_parents;
    bool force_self = true;
    FitConfig fit;

    static RunConfig from_json(const Json& j);
    Json to_json() const;
    /// Digest of the normalized configuration (defaults filled in).
    std::string digest() const { return json_digest(to_json()); }

    ModelSpace model_space(std::size_t dim) const;
    /// Throws ValidationError when dim or horizon is still unset.
    ComplexityJobConfig complexity_config(unsigned threads) const;
};

/// Threads from --threads, else HAWKES_MDL_THREADS, else 0 (all available).
unsigned resolve_threads(std::optional<unsigned> flag);

/// Runs one command line (without the program name). Exit codes: 0 success,
/// 1 validation error (bad flags, missing files, schema violations, cache misses),
/// 2 runtime failure.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hawkes_mdl::cli
