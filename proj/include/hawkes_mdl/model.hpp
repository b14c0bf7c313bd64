#pragma once

// Domain types shared by every stage of the causal-discovery pipeline.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hawkes_mdl {

using Matrix = std::vector<std::vector<double>>;

/// Raised when an input violates a documented invariant.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// One realization of a p-dimensional point process on [0, horizon].
class EventData {
public:
    EventData() = default;

    /// Checks every invariant and throws ValidationError naming the first violation.
    static EventData validate(double horizon, std::size_t dim, std::vector<std::vector<double>> events);

    double horizon() const noexcept { return horizon_; }
    std::size_t dim() const noexcept { return events_.size(); }
    std::span<const double> events(std::size_t i) const { return events_.at(i); }
    const std::vector<std::vector<double>>& all_events() const noexcept { return events_; }
    std::size_t count(std::size_t i) const { return events_.at(i).size(); }
    std::size_t total_count() const noexcept;

    bool operator==(const EventData&) const = default;

private:
    double horizon_ = 0.0;
    std::vector<std::vector<double>> events_;
};

/// Binary parent set of one dimension: bit j set iff dimension j may excite it.
class RowPattern {
public:
    static constexpr std::size_t kMaxDim = 64;

    RowPattern() = default;
    RowPattern(std::size_t dim, std::uint64_t bits);

    static RowPattern empty(std::size_t dim) { return RowPattern(dim, 0); }
    static RowPattern full(std::size_t dim);
    /// Parses "0110"; character j is column j.
    static RowPattern parse(std::string_view text);

    std::size_t dim() const noexcept { return dim_; }
    std::uint64_t bits() const noexcept { return bits_; }
    bool test(std::size_t j) const { return (bits_ >> j) & 1U; }
    std::size_t count() const noexcept;
    RowPattern with(std::size_t j, bool on) const;
    bool subset_of(const RowPattern& other) const noexcept {
        return dim_ == other.dim_ && (bits_ & ~other.bits_) == 0;
    }
    std::vector<std::size_t> members() const;
    std::string to_string() const;

    bool operator==(const RowPattern&) const = default;
    /// Lexicographic on the bit string, column 0 first.
    std::strong_ordering operator<=>(const RowPattern& other) const;

private:
    std::size_t dim_ = 0;
    std::uint64_t bits_ = 0;
};

/// Candidate causal graph; entry (i, j) = 1 iff j may Granger-cause i.
class Adjacency {
public:
    Adjacency() = default;
    explicit Adjacency(std::size_t dim);
    explicit Adjacency(std::vector<RowPattern> rows);
    static Adjacency from_matrix(const std::vector<std::vector<int>>& entries);
    static Adjacency identity(std::size_t dim);

    std::size_t dim() const noexcept { return rows_.size(); }
    bool at(std::size_t i, std::size_t j) const { return rows_.at(i).test(j); }
    void set(std::size_t i, std::size_t j, bool on);
    const RowPattern& row(std::size_t i) const { return rows_.at(i); }
    const std::vector<RowPattern>& rows() const noexcept { return rows_; }
    std::size_t count() const noexcept;
    std::vector<std::vector<int>> to_matrix() const;

    bool operator==(const Adjacency&) const = default;

private:
    std::vector<RowPattern> rows_;
};

/// Parameters of one dimension: baseline and its incoming influence row.
struct DimParams {
    double mu = 0.0;
    std::vector<double> alpha;
};

/// Exponential-kernel multivariate Hawkes parameters with a known decay matrix.
class ExpMhpParams {
public:
    ExpMhpParams() = default;
    ExpMhpParams(std::vector<double> mu, Matrix alpha, Matrix beta);

    std::size_t dim() const noexcept { return mu_.size(); }
    const std::vector<double>& mu() const noexcept { return mu_; }
    const Matrix& alpha() const noexcept { return alpha_; }
    const Matrix& beta() const noexcept { return beta_; }
    DimParams row(std::size_t i) const { return {mu_.at(i), alpha_.at(i)}; }
    /// Sparsity pattern of alpha.
    Adjacency support() const;

    bool operator==(const ExpMhpParams&) const = default;

private:
    std::vector<double> mu_;
    Matrix alpha_;
    Matrix beta_;
};

enum class LuckinessKind { Uniform, ExpPenalty };

/// Log-concave luckiness v. ExpPenalty is exp(-mu_i - sum of free alpha_ij) per dimension.
struct LuckinessSpec {
    LuckinessKind kind = LuckinessKind::Uniform;
    bool operator==(const LuckinessSpec&) const = default;
};

std::string to_string(LuckinessKind kind);
LuckinessKind parse_luckiness(std::string_view text);

/// Closed interval used by the generative prior.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool operator==(const Interval&) const = default;
};

/// Decay matrix: either one constant for every pair or an explicit p x p matrix.
class DecaySpec {
public:
    DecaySpec() = default;
    static DecaySpec constant(double value);
    static DecaySpec explicit_matrix(Matrix beta);

    bool is_constant() const noexcept { return matrix_.empty(); }
    double constant_value() const noexcept { return constant_; }
    const Matrix& explicit_value() const noexcept { return matrix_; }
    /// Materializes the p x p matrix; throws when an explicit matrix has another size.
    Matrix matrix(std::size_t dim) const;

    bool operator==(const DecaySpec&) const = default;

private:
    double constant_ = 1.0;
    Matrix matrix_;
};

enum class ScenarioKind { Default, Sparse };

/// How nature draws (graph, parameters) before drawing data.
struct GenerativePrior {
    ScenarioKind scenario = ScenarioKind::Default;
    double edge_probability = 0.3;  // Default: Bernoulli(r) per off-diagonal entry
    std::size_t max_in_degree = 1;  // Sparse: k ~ unif{0..m} parents per row
    Interval alpha_range{0.1, 0.2};
    Interval mu_range{0.5, 1.0};
    DecaySpec beta = DecaySpec::constant(1.0);
    bool self_excite = true;

    /// Throws ValidationError when the prior is inconsistent with dimension p.
    void validate(std::size_t dim) const;

    bool operator==(const GenerativePrior&) const = default;
};

/// Monte-Carlo estimate of one per-dimension model complexity (nats).
struct ComplexityEstimate {
    double comp = 0.0;
    double std_error = 0.0;
    std::size_t n_samples = 0;
    std::size_t non_converged = 0;
    std::vector<double> log_q;  // per-sample values, empty unless retained
};

/// Per-dimension MDL code length and its four parts.
class MdlScore {
public:
    MdlScore() = default;
    MdlScore(double neg_log_prior, double neg_log_lik, double neg_log_luck, double comp);

    double neg_log_prior() const noexcept { return neg_log_prior_; }
    double neg_log_lik() const noexcept { return neg_log_lik_; }
    double neg_log_luck() const noexcept { return neg_log_luck_; }
    double comp() const noexcept { return comp_; }
    double total() const noexcept { return total_; }

    MdlScore with_comp(double comp) const {
        return {neg_log_prior_, neg_log_lik_, neg_log_luck_, comp};
    }

private:
    double neg_log_prior_ = 0.0;
    double neg_log_lik_ = 0.0;
    double neg_log_luck_ = 0.0;
    double comp_ = 0.0;
    double total_ = 0.0;
};

}  // namespace hawkes_mdl
