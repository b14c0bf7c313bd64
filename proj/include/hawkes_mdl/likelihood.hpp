#pragma once

// Exp-MHP conditional intensity and the closed-form per-dimension negative
// log-likelihood
//
//   -log p(x | theta_i) = mu_i T + sum_j (alpha_ij / beta_ij) sum_k [1 - exp(-beta_ij (T - t^j_k))]
//                         - sum_l log(mu_i + sum_j alpha_ij A_ij(l)),
//
// with A_ij(l) = sum_{k: t^j_k < t^i_l} exp(-beta_ij (t^i_l - t^j_k)).

#include "hawkes_mdl/model.hpp"

#include <memory>
#include <span>
#include <vector>

namespace hawkes_mdl {

/// Data of one target dimension reduced to the sufficient statistics of its
/// likelihood, plus the free-coordinate mask of a row pattern.
///
/// Building the view costs O(n_i + n_j) per source j using the exponential
/// recursion A_ij(l) = e^{-beta_ij (t_l - t_{l-1})} A_ij(l-1) + (new source events).
/// Masked copies share the statistics.
class DimensionView {
public:
    DimensionView(const EventData& x, std::size_t i, std::span<const double> beta_row);

    DimensionView masked(const RowPattern& mask) const;

    std::size_t index() const noexcept { return index_; }
    std::size_t dim() const noexcept { return stats_->compensator.size(); }
    double horizon() const noexcept { return stats_->horizon; }
    std::size_t n_events() const noexcept { return stats_->n_events; }
    const RowPattern& mask() const noexcept { return mask_; }
    std::span<const double> beta_row() const noexcept { return stats_->beta_row; }

    /// (1 / beta_ij) sum_k [1 - exp(-beta_ij (T - t^j_k))].
    double compensator(std::size_t j) const { return stats_->compensator[j]; }
    /// A_ij(l), row-major n_events x dim.
    double excitation(std::size_t l, std::size_t j) const { return stats_->excitation[l * dim() + j]; }
    std::span<const double> excitation_row(std::size_t l) const {
        return {stats_->excitation.data() + l * dim(), dim()};
    }

private:
    struct Stats {
        double horizon = 0.0;
        std::size_t n_events = 0;
        std::vector<double> beta_row;
        std::vector<double> compensator;
        std::vector<double> excitation;
    };

    DimensionView(std::size_t index, std::shared_ptr<const Stats> stats, RowPattern mask)
        : index_(index), stats_(std::move(stats)), mask_(mask) {}

    std::size_t index_ = 0;
    std::shared_ptr<const Stats> stats_;
    RowPattern mask_;
};

/// lambda_i(t) from the strict past (events at exactly t are excluded).
double intensity(const ExpMhpParams& params, const EventData& x, std::size_t i, double t);

/// Returns +infinity when the intensity vanishes at some event of dimension i.
double nll_dim(const DimParams& theta, const DimensionView& view);

/// Sum of nll_dim over all dimensions, in index order.
double nll_total(const ExpMhpParams& params, const EventData& x);

/// Gradient over the free coordinates of view.mask(): d/d mu first, then
/// d/d alpha_ij for each j in the mask, ascending. Throws std::domain_error
/// when theta is infeasible.
std::vector<double> nll_grad_dim(const DimParams& theta, const DimensionView& view);

}  // namespace hawkes_mdl
