#pragma once

// MDL estimator: argmin over the restricted cone of -log p(x | theta_i) - log v_i(theta_i).

#include "hawkes_mdl/likelihood.hpp"
#include "hawkes_mdl/model.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace hawkes_mdl {

struct FitConfig {
    double tol = 1e-8;           // infinity norm of the projected gradient
    std::size_t max_iter = 2000;
    double armijo = 1e-4;
    double shrink = 0.5;
    /// Starting point; masked coordinates are ignored. Default: mu = n_i/(2T) + 1e-3, free alpha = 0.01.
    std::optional<DimParams> initial;

    void validate() const;
};

struct FitResult {
    DimParams theta_hat;
    double objective = 0.0;  // nll_dim(theta_hat) - log v_i(theta_hat)
    double neg_log_lik = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
    double projected_gradient = 0.0;
};

/// log v_i(theta_i): 0 for Uniform, -mu_i - sum_{j in pattern} alpha_ij for ExpPenalty.
double log_luckiness(const LuckinessSpec& v, const DimParams& theta, const RowPattern& pattern);

/// Fits dimension `view.index()` on the free coordinates of `view.mask()`.
FitResult mdl_fit(const DimensionView& view, const LuckinessSpec& v, const FitConfig& cfg = {});

FitResult mdl_fit(const EventData& x, std::size_t i, const RowPattern& gamma_i, const LuckinessSpec& v,
                  const Matrix& beta, const FitConfig& cfg = {});

/// Infinity norm of the gradient projected onto the tangent cone of the nonnegative orthant.
double projected_gradient_norm(std::span<const double> point, std::span<const double> grad);

/// Smooth convex objective over the nonnegative orthant. Returns +infinity
/// outside the domain; `grad` is only requested at finite points.
struct ConeObjective {
    std::function<double(std::span<const double>)> value;
    std::function<void(std::span<const double>, std::span<double>)> gradient;
};

struct ConeSolution {
    std::vector<double> point;
    double value = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
    double projected_gradient = 0.0;
};

/// Projected gradient descent with Barzilai-Borwein trial steps and Armijo
/// backtracking. `start` must be feasible (finite objective).
ConeSolution minimize_on_cone(const ConeObjective& f, std::vector<double> start, const FitConfig& cfg);

}  // namespace hawkes_mdl
