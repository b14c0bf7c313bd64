#include "hawkes_mdl/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hawkes_mdl {

DimensionView::DimensionView(const EventData& x, std::size_t i, std::span<const double> beta_row)
    : index_(i), mask_(RowPattern::full(x.dim())) {
    const std::size_t dim = x.dim();
    if (i >= dim) {
        throw std::out_of_range("dimension index out of range");
    }
    if (beta_row.size() != dim) {
        throw ValidationError("decay row length must equal the dimension");
    }
    auto stats = std::make_shared<Stats>();
    const double horizon = x.horizon();
    const auto target = x.events(i);
    stats->horizon = horizon;
    stats->n_events = target.size();
    stats->beta_row.assign(beta_row.begin(), beta_row.end());
    stats->compensator.assign(dim, 0.0);
    stats->excitation.assign(target.size() * dim, 0.0);

    for (std::size_t j = 0; j < dim; ++j) {
        const double b = beta_row[j];
        const auto source = x.events(j);
        double comp = 0.0;
        for (double t : source) {
            comp += -std::expm1(-b * (horizon - t));
        }
        stats->compensator[j] = comp / b;

        double a = 0.0;
        double prev = 0.0;
        std::size_t k = 0;
        for (std::size_t l = 0; l < target.size(); ++l) {
            const double t = target[l];
            a *= std::exp(-b * (t - prev));
            while (k < source.size() && source[k] < t) {
                a += std::exp(-b * (t - source[k]));
                ++k;
            }
            stats->excitation[l * dim + j] = a;
            prev = t;
        }
    }
    stats_ = std::move(stats);
}

DimensionView DimensionView::masked(const RowPattern& mask) const {
    if (mask.dim() != dim()) {
        throw ValidationError("mask dimension must equal the data dimension");
    }
    return DimensionView(index_, stats_, mask);
}

double intensity(const ExpMhpParams& params, const EventData& x, std::size_t i, double t) {
    double lambda = params.mu().at(i);
    for (std::size_t j = 0; j < x.dim(); ++j) {
        const double a = params.alpha()[i][j];
        if (a == 0.0) {
            continue;
        }
        const double b = params.beta()[i][j];
        const auto source = x.events(j);
        const auto end = std::lower_bound(source.begin(), source.end(), t);
        double sum = 0.0;
        for (auto it = source.begin(); it != end; ++it) {
            sum += std::exp(-b * (t - *it));
        }
        lambda += a * sum;
    }
    return lambda;
}

double nll_dim(const DimParams& theta, const DimensionView& view) {
    const std::size_t dim = view.dim();
    if (theta.alpha.size() != dim) {
        throw ValidationError("theta row length must equal the dimension");
    }
    double value = theta.mu * view.horizon();
    for (std::size_t j = 0; j < dim; ++j) {
        value += theta.alpha[j] * view.compensator(j);
    }
    for (std::size_t l = 0; l < view.n_events(); ++l) {
        const auto row = view.excitation_row(l);
        double lambda = theta.mu;
        for (std::size_t j = 0; j < dim; ++j) {
            lambda += theta.alpha[j] * row[j];
        }
        if (!(lambda > 0.0)) {
            return std::numeric_limits<double>::infinity();
        }
        value -= std::log(lambda);
    }
    return value;
}

double nll_total(const ExpMhpParams& params, const EventData& x) {
    if (params.dim() != x.dim()) {
        throw ValidationError("parameter and data dimensions differ");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < x.dim(); ++i) {
        total += nll_dim(params.row(i), DimensionView(x, i, params.beta()[i]));
    }
    return total;
}

std::vector<double> nll_grad_dim(const DimParams& theta, const DimensionView& view) {
    const std::size_t dim = view.dim();
    if (theta.alpha.size() != dim) {
        throw ValidationError("theta row length must equal the dimension");
    }
    const auto free = view.mask().members();
    std::vector<double> grad(1 + free.size(), 0.0);
    grad[0] = view.horizon();
    for (std::size_t c = 0; c < free.size(); ++c) {
        grad[1 + c] = view.compensator(free[c]);
    }
    for (std::size_t l = 0; l < view.n_events(); ++l) {
        const auto row = view.excitation_row(l);
        double lambda = theta.mu;
        for (std::size_t j = 0; j < dim; ++j) {
            lambda += theta.alpha[j] * row[j];
        }
        if (!(lambda > 0.0)) {
            throw std::domain_error("gradient requested at an infeasible point (zero intensity at an event)");
        }
        const double inv = 1.0 / lambda;
        grad[0] -= inv;
        for (std::size_t c = 0; c < free.size(); ++c) {
            grad[1 + c] -= row[free[c]] * inv;
        }
    }
    return grad;
}

}  // namespace hawkes_mdl
