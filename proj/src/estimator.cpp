#include "hawkes_mdl/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hawkes_mdl {

void FitConfig::validate() const {
    if (!(tol > 0.0)) {
        throw ValidationError("fit tolerance must be positive");
    }
    if (max_iter < 1) {
        throw ValidationError("fit iteration cap must be at least 1");
    }
    if (!(armijo > 0.0 && armijo < 1.0) || !(shrink > 0.0 && shrink < 1.0)) {
        throw ValidationError("line-search parameters must lie in (0, 1)");
    }
}

double log_luckiness(const LuckinessSpec& v, const DimParams& theta, const RowPattern& pattern) {
    if (v.kind == LuckinessKind::Uniform) {
        return 0.0;
    }
    double s = theta.mu;
    for (std::size_t j : pattern.members()) {
        s += theta.alpha.at(j);
    }
    return -s;
}

double projected_gradient_norm(std::span<const double> point, std::span<const double> grad) {
    double norm = 0.0;
    for (std::size_t c = 0; c < point.size(); ++c) {
        const double g = point[c] > 0.0 ? std::abs(grad[c]) : std::max(0.0, -grad[c]);
        norm = std::max(norm, g);
    }
    return norm;
}

ConeSolution minimize_on_cone(const ConeObjective& f, std::vector<double> start, const FitConfig& cfg) {
    cfg.validate();
    const std::size_t n = start.size();
    for (double& c : start) {
        c = std::max(c, 0.0);
    }
    ConeSolution sol;
    sol.point = std::move(start);
    sol.value = f.value(sol.point);
    if (!std::isfinite(sol.value)) {
        throw std::domain_error("optimizer start point is infeasible");
    }
    std::vector<double> grad(n);
    std::vector<double> trial(n);
    std::vector<double> trial_grad(n);
    f.gradient(sol.point, grad);
    sol.projected_gradient = projected_gradient_norm(sol.point, grad);

    constexpr std::size_t kMaxBacktracks = 80;
    double step = 1.0 / std::max(1.0, sol.projected_gradient);

    while (sol.iterations < cfg.max_iter) {
        if (sol.projected_gradient <= cfg.tol) {
            sol.converged = true;
            break;
        }
        bool accepted = false;
        double s = step;
        double trial_value = 0.0;
        for (std::size_t bt = 0; bt < kMaxBacktracks && !accepted; ++bt, s *= cfg.shrink) {
            double slope = 0.0;
            bool moved = false;
            for (std::size_t c = 0; c < n; ++c) {
                trial[c] = std::max(0.0, sol.point[c] - s * grad[c]);
                slope += grad[c] * (trial[c] - sol.point[c]);
                moved = moved || trial[c] != sol.point[c];
            }
            if (!moved) {
                break;
            }
            trial_value = f.value(trial);
            if (!std::isfinite(trial_value)) {
                continue;
            }
            if (trial_value <= sol.value + cfg.armijo * slope) {
                f.gradient(trial, trial_grad);
                accepted = true;
            } else if (trial_value <= sol.value + 1e-10 * (std::abs(sol.value) + 1.0)) {
                // Approximate Armijo: once decreases drown in rounding of the objective,
                // judge the step by the directional derivative at the trial point.
                f.gradient(trial, trial_grad);
                double trial_slope = 0.0;
                for (std::size_t c = 0; c < n; ++c) {
                    trial_slope += trial_grad[c] * (trial[c] - sol.point[c]);
                }
                accepted = trial_slope <= -(1.0 - 2.0 * cfg.armijo) * slope;
            }
            if (accepted) {
                break;
            }
        }
        if (!accepted) {
            break;
        }
        double ss = 0.0;
        double sy = 0.0;
        double scale = 1.0;
        for (std::size_t c = 0; c < n; ++c) {
            const double dx = trial[c] - sol.point[c];
            ss += dx * dx;
            sy += dx * (trial_grad[c] - grad[c]);
            scale = std::max(scale, std::abs(sol.point[c]));
        }
        // Barzilai-Borwein step; displacements near rounding level give no curvature information.
        if (std::sqrt(ss) > 1e-10 * scale) {
            step = sy > 0.0 ? ss / sy : 2.0 * s;
            step = std::clamp(step, 1e-12, 1e12);
        }
        sol.point.swap(trial);
        grad.swap(trial_grad);
        sol.value = trial_value;
        sol.projected_gradient = projected_gradient_norm(sol.point, grad);
        ++sol.iterations;
    }
    if (sol.projected_gradient <= cfg.tol) {
        sol.converged = true;
    }
    return sol;
}

FitResult mdl_fit(const DimensionView& view, const LuckinessSpec& v, const FitConfig& cfg) {
    const std::size_t dim = view.dim();
    const auto free = view.mask().members();
    const bool penalized = v.kind == LuckinessKind::ExpPenalty;

    DimParams theta{0.0, std::vector<double>(dim, 0.0)};
    auto unpack = [&](std::span<const double> z) {
        theta.mu = z[0];
        for (std::size_t c = 0; c < free.size(); ++c) {
            theta.alpha[free[c]] = z[1 + c];
        }
    };
    auto penalty = [&](std::span<const double> z) {
        return penalized ? std::accumulate(z.begin(), z.end(), 0.0) : 0.0;
    };

    ConeObjective objective;
    objective.value = [&](std::span<const double> z) {
        unpack(z);
        return nll_dim(theta, view) + penalty(z);
    };
    objective.gradient = [&](std::span<const double> z, std::span<double> out) {
        unpack(z);
        const auto g = nll_grad_dim(theta, view);
        for (std::size_t c = 0; c < g.size(); ++c) {
            out[c] = g[c] + (penalized ? 1.0 : 0.0);
        }
    };

    std::vector<double> start(1 + free.size());
    if (cfg.initial) {
        if (cfg.initial->alpha.size() != dim) {
            throw ValidationError("initial point has the wrong dimension");
        }
        start[0] = cfg.initial->mu;
        for (std::size_t c = 0; c < free.size(); ++c) {
            start[1 + c] = cfg.initial->alpha[free[c]];
        }
    } else {
        start[0] = static_cast<double>(view.n_events()) / (2.0 * view.horizon()) + 1e-3;
        std::fill(start.begin() + 1, start.end(), 0.01);
    }

    const ConeSolution sol = minimize_on_cone(objective, std::move(start), cfg);

    FitResult out;
    unpack(sol.point);
    out.theta_hat = theta;
    out.neg_log_lik = nll_dim(out.theta_hat, view);
    out.objective = out.neg_log_lik - log_luckiness(v, out.theta_hat, view.mask());
    out.converged = sol.converged;
    out.iterations = sol.iterations;
    out.projected_gradient = sol.projected_gradient;
    return out;
}

FitResult mdl_fit(const EventData& x, std::size_t i, const RowPattern& gamma_i, const LuckinessSpec& v,
                  const Matrix& beta, const FitConfig& cfg) {
    if (i >= x.dim()) {
        throw std::out_of_range("dimension index out of range");
    }
    if (beta.size() != x.dim()) {
        throw ValidationError("decay matrix dimension differs from the data");
    }
    return mdl_fit(DimensionView(x, i, beta[i]).masked(gamma_i), v, cfg);
}

}  // namespace hawkes_mdl
