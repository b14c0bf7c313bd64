#include "hawkes_mdl/model.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace hawkes_mdl {

namespace {

[[noreturn]] void fail(const std::string& message) { throw ValidationError(message); }

void check_square(const Matrix& m, std::size_t dim, const char* label) {
    if (m.size() != dim) {
        std::ostringstream os;
        os << label << " has " << m.size() << " rows, expected " << dim;
        fail(os.str());
    }
    for (std::size_t i = 0; i < dim; ++i) {
        if (m[i].size() != dim) {
            std::ostringstream os;
            os << label << " row " << i << " has " << m[i].size() << " columns, expected " << dim;
            fail(os.str());
        }
    }
}

}  // namespace

EventData EventData::validate(double horizon, std::size_t dim, std::vector<std::vector<double>> events) {
    if (!std::isfinite(horizon) || horizon <= 0.0) {
        fail("horizon must be a finite positive number");
    }
    if (dim == 0) {
        fail("dimension must be positive");
    }
    if (events.size() != dim) {
        std::ostringstream os;
        os << "dimension mismatch: dim = " << dim << " but " << events.size() << " event sequences given";
        fail(os.str());
    }
    for (std::size_t i = 0; i < dim; ++i) {
        const auto& seq = events[i];
        for (std::size_t k = 0; k < seq.size(); ++k) {
            const double t = seq[k];
            if (!std::isfinite(t) || t < 0.0 || t > horizon) {
                std::ostringstream os;
                os << "out-of-range timestamp " << t << " at dimension " << i << ", index " << k
                   << " (horizon " << horizon << ")";
                fail(os.str());
            }
            if (k > 0 && !(seq[k - 1] < t)) {
                std::ostringstream os;
                os << "non-monotone sequence at dimension " << i << ", index " << k << ": " << seq[k - 1]
                   << " followed by " << t;
                fail(os.str());
            }
        }
    }
    EventData out;
    out.horizon_ = horizon;
    out.events_ = std::move(events);
    return out;
}

std::size_t EventData::total_count() const noexcept {
    std::size_t n = 0;
    for (const auto& seq : events_) {
        n += seq.size();
    }
    return n;
}

RowPattern::RowPattern(std::size_t dim, std::uint64_t bits) : dim_(dim), bits_(bits) {
    if (dim == 0 || dim > kMaxDim) {
        fail("row pattern dimension must be in [1, 64]");
    }
    if (dim < kMaxDim && (bits >> dim) != 0) {
        fail("row pattern has bits beyond its dimension");
    }
}

RowPattern RowPattern::full(std::size_t dim) {
    return RowPattern(dim, dim == kMaxDim ? ~std::uint64_t{0} : (std::uint64_t{1} << dim) - 1);
}

RowPattern RowPattern::parse(std::string_view text) {
    if (text.empty() || text.size() > kMaxDim) {
        fail("row pattern string must have 1..64 characters");
    }
    std::uint64_t bits = 0;
    for (std::size_t j = 0; j < text.size(); ++j) {
        if (text[j] == '1') {
            bits |= std::uint64_t{1} << j;
        } else if (text[j] != '0') {
            fail("row pattern string may contain only '0' and '1'");
        }
    }
    return RowPattern(text.size(), bits);
}

std::size_t RowPattern::count() const noexcept { return static_cast<std::size_t>(std::popcount(bits_)); }

RowPattern RowPattern::with(std::size_t j, bool on) const {
    if (j >= dim_) {
        throw std::out_of_range("row pattern column out of range");
    }
    const std::uint64_t bit = std::uint64_t{1} << j;
    return RowPattern(dim_, on ? (bits_ | bit) : (bits_ & ~bit));
}

std::vector<std::size_t> RowPattern::members() const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < dim_; ++j) {
        if (test(j)) {
            out.push_back(j);
        }
    }
    return out;
}

std::string RowPattern::to_string() const {
    std::string s(dim_, '0');
    for (std::size_t j = 0; j < dim_; ++j) {
        if (test(j)) {
            s[j] = '1';
        }
    }
    return s;
}

std::strong_ordering RowPattern::operator<=>(const RowPattern& other) const {
    if (auto c = dim_ <=> other.dim_; c != 0) {
        return c;
    }
    for (std::size_t j = 0; j < dim_; ++j) {
        if (test(j) != other.test(j)) {
            return test(j) ? std::strong_ordering::greater : std::strong_ordering::less;
        }
    }
    return std::strong_ordering::equal;
}

Adjacency::Adjacency(std::size_t dim) {
    rows_.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        rows_.push_back(RowPattern::empty(dim));
    }
}

Adjacency::Adjacency(std::vector<RowPattern> rows) : rows_(std::move(rows)) {
    for (const auto& r : rows_) {
        if (r.dim() != rows_.size()) {
            fail("adjacency rows must have length equal to the number of rows");
        }
    }
}

Adjacency Adjacency::from_matrix(const std::vector<std::vector<int>>& entries) {
    const std::size_t dim = entries.size();
    Adjacency out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        if (entries[i].size() != dim) {
            fail("adjacency matrix must be square");
        }
        for (std::size_t j = 0; j < dim; ++j) {
            const int e = entries[i][j];
            if (e != 0 && e != 1) {
                fail("adjacency entries must be 0 or 1");
            }
            out.set(i, j, e == 1);
        }
    }
    return out;
}

Adjacency Adjacency::identity(std::size_t dim) {
    Adjacency out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        out.set(i, i, true);
    }
    return out;
}

void Adjacency::set(std::size_t i, std::size_t j, bool on) { rows_.at(i) = rows_.at(i).with(j, on); }

std::size_t Adjacency::count() const noexcept {
    std::size_t n = 0;
    for (const auto& r : rows_) {
        n += r.count();
    }
    return n;
}

std::vector<std::vector<int>> Adjacency::to_matrix() const {
    std::vector<std::vector<int>> out(dim(), std::vector<int>(dim(), 0));
    for (std::size_t i = 0; i < dim(); ++i) {
        for (std::size_t j = 0; j < dim(); ++j) {
            out[i][j] = at(i, j) ? 1 : 0;
        }
    }
    return out;
}

ExpMhpParams::ExpMhpParams(std::vector<double> mu, Matrix alpha, Matrix beta)
    : mu_(std::move(mu)), alpha_(std::move(alpha)), beta_(std::move(beta)) {
    const std::size_t dim = mu_.size();
    if (dim == 0) {
        fail("parameters need at least one dimension");
    }
    check_square(alpha_, dim, "alpha");
    check_square(beta_, dim, "beta");
    for (std::size_t i = 0; i < dim; ++i) {
        if (!std::isfinite(mu_[i]) || mu_[i] < 0.0) {
            fail("mu must be finite and nonnegative");
        }
        for (std::size_t j = 0; j < dim; ++j) {
            if (!std::isfinite(alpha_[i][j]) || alpha_[i][j] < 0.0) {
                fail("alpha must be finite and nonnegative");
            }
            if (!std::isfinite(beta_[i][j]) || beta_[i][j] <= 0.0) {
                fail("beta must be finite and strictly positive");
            }
        }
    }
}

Adjacency ExpMhpParams::support() const {
    Adjacency out(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        for (std::size_t j = 0; j < dim(); ++j) {
            out.set(i, j, alpha_[i][j] != 0.0);
        }
    }
    return out;
}

std::string to_string(LuckinessKind kind) {
    return kind == LuckinessKind::Uniform ? "uniform" : "exp_penalty";
}

LuckinessKind parse_luckiness(std::string_view text) {
    if (text == "uniform") {
        return LuckinessKind::Uniform;
    }
    if (text == "exp_penalty") {
        return LuckinessKind::ExpPenalty;
    }
    fail("unknown luckiness '" + std::string(text) + "' (expected uniform or exp_penalty)");
}

DecaySpec DecaySpec::constant(double value) {
    if (!std::isfinite(value) || value <= 0.0) {
        fail("decay constant must be finite and strictly positive");
    }
    DecaySpec out;
    out.constant_ = value;
    return out;
}

DecaySpec DecaySpec::explicit_matrix(Matrix beta) {
    if (beta.empty()) {
        fail("explicit decay matrix must not be empty");
    }
    check_square(beta, beta.size(), "beta");
    for (const auto& row : beta) {
        for (double b : row) {
            if (!std::isfinite(b) || b <= 0.0) {
                fail("beta must be finite and strictly positive");
            }
        }
    }
    DecaySpec out;
    out.matrix_ = std::move(beta);
    return out;
}

Matrix DecaySpec::matrix(std::size_t dim) const {
    if (is_constant()) {
        return Matrix(dim, std::vector<double>(dim, constant_));
    }
    if (matrix_.size() != dim) {
        std::ostringstream os;
        os << "decay matrix is " << matrix_.size() << "x" << matrix_.size() << " but dimension is " << dim;
        fail(os.str());
    }
    return matrix_;
}

void GenerativePrior::validate(std::size_t dim) const {
    if (dim == 0 || dim > RowPattern::kMaxDim) {
        fail("dimension must be in [1, 64]");
    }
    if (scenario == ScenarioKind::Default && !(edge_probability >= 0.0 && edge_probability <= 1.0)) {
        fail("edge probability r must lie in [0, 1]");
    }
    if (scenario == ScenarioKind::Sparse && max_in_degree >= dim) {
        std::ostringstream os;
        os << "max in-degree m = " << max_in_degree << " must be smaller than dimension " << dim;
        fail(os.str());
    }
    for (const auto* range : {&alpha_range, &mu_range}) {
        if (!(range->lo >= 0.0 && range->lo <= range->hi && std::isfinite(range->hi))) {
            fail("prior intervals must be finite, nonnegative and ordered");
        }
    }
    (void)beta.matrix(dim);
}

MdlScore::MdlScore(double neg_log_prior, double neg_log_lik, double neg_log_luck, double comp)
    : neg_log_prior_(neg_log_prior),
      neg_log_lik_(neg_log_lik),
      neg_log_luck_(neg_log_luck),
      comp_(comp),
      total_(((neg_log_prior + neg_log_lik) + neg_log_luck) + comp) {}

}  // namespace hawkes_mdl
