#include "hawkes_mdl/complexity.hpp"

#include "hawkes_mdl/likelihood.hpp"
#include "hawkes_mdl/simulate.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>

namespace hawkes_mdl {

namespace {

constexpr std::uint64_t kComplexityStreamTag = 0x434f4d50;  // "COMP"

int thread_count(unsigned requested) {
    return requested == 0 ? omp_get_max_threads() : static_cast<int>(requested);
}

}  // namespace

void ComplexityJobConfig::validate() const {
    if (dim == 0 || dim > RowPattern::kMaxDim) {
        throw ValidationError("complexity job: dimension must be in [1, 64]");
    }
    if (!std::isfinite(horizon) || horizon <= 0.0) {
        throw ValidationError("complexity job: horizon must be finite and positive");
    }
    if (n_samples < 1) {
        throw ValidationError("complexity job: number of Monte-Carlo samples must be at least 1");
    }
    prior.validate(dim);
    if (!(prior.mu_range.lo > 0.0)) {
        throw ValidationError("complexity job: mu range must be bounded away from 0 (full support on data)");
    }
    fit.validate();
    if (!(max_failure_fraction >= 0.0 && max_failure_fraction <= 1.0)) {
        throw ValidationError("complexity job: failure fraction must lie in [0, 1]");
    }
}

SeedSpec complexity_sample_seed(std::uint64_t master, std::size_t k) {
    return SeedSpec{master, {kComplexityStreamTag, k}};
}

ComplexityEstimate summarize_log_q(std::span<const double> log_q) {
    if (log_q.empty()) {
        throw ValidationError("complexity estimate needs at least one sample");
    }
    const double shift = *std::max_element(log_q.begin(), log_q.end());
    if (!std::isfinite(shift)) {
        throw std::domain_error("non-finite log Q sample");
    }
    const auto n = static_cast<double>(log_q.size());
    double mean = 0.0;
    for (double lq : log_q) {
        mean += std::exp(lq - shift);
    }
    mean /= n;
    double var = 0.0;
    for (double lq : log_q) {
        const double d = std::exp(lq - shift) - mean;
        var += d * d;
    }
    ComplexityEstimate est;
    est.comp = shift + std::log(mean);
    est.n_samples = log_q.size();
    est.std_error = log_q.size() > 1 ? std::sqrt(var / (n - 1.0)) / (mean * std::sqrt(n)) : 0.0;
    return est;
}

std::vector<ComplexityEstimate> estimate_comp_batch(std::span<const ComplexityJob> jobs,
                                                    const ComplexityJobConfig& cfg) {
    cfg.validate();
    for (const auto& job : jobs) {
        if (job.dim_index >= cfg.dim || job.pattern.dim() != cfg.dim) {
            throw ValidationError("complexity job does not match the configured dimension");
        }
    }
    std::vector<std::size_t> dims;
    for (const auto& job : jobs) {
        dims.push_back(job.dim_index);
    }
    std::sort(dims.begin(), dims.end());
    dims.erase(std::unique(dims.begin(), dims.end()), dims.end());

    const Matrix beta = cfg.beta();
    const std::size_t n = cfg.n_samples;
    std::vector<std::vector<double>> log_q(jobs.size(), std::vector<double>(n, 0.0));
    std::vector<std::vector<char>> failed(jobs.size(), std::vector<char>(n, 0));
    std::vector<std::exception_ptr> errors(n);

#pragma omp parallel for schedule(dynamic) num_threads(thread_count(cfg.threads))
    for (std::size_t k = 0; k < n; ++k) {
        try {
            const SeedSpec seed = complexity_sample_seed(cfg.seed, k);
            const GroundTruth z = draw_stationary_truth(cfg.prior, cfg.dim, seed.child(0));
            const EventData sample = simulate(z.params, cfg.horizon, seed.child(1));
            std::vector<std::optional<DimensionView>> views(cfg.dim);
            std::vector<double> truth_nll(cfg.dim, 0.0);
            for (std::size_t i : dims) {
                views[i].emplace(sample, i, beta[i]);
                truth_nll[i] = nll_dim(z.params.row(i), *views[i]);
            }
            for (std::size_t q = 0; q < jobs.size(); ++q) {
                const std::size_t i = jobs[q].dim_index;
                const FitResult fit = mdl_fit(views[i]->masked(jobs[q].pattern), cfg.luckiness, cfg.fit);
                log_q[q][k] = -fit.objective + truth_nll[i];
                failed[q][k] = fit.converged ? 0 : 1;
            }
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    std::vector<ComplexityEstimate> out;
    out.reserve(jobs.size());
    for (std::size_t q = 0; q < jobs.size(); ++q) {
        ComplexityEstimate est = summarize_log_q(log_q[q]);
        est.non_converged = static_cast<std::size_t>(std::count(failed[q].begin(), failed[q].end(), 1));
        if (static_cast<double>(est.non_converged) > cfg.max_failure_fraction * static_cast<double>(n)) {
            std::ostringstream os;
            os << "complexity estimate for dimension " << jobs[q].dim_index << ", pattern "
               << jobs[q].pattern.to_string() << ": " << est.non_converged << " of " << n
               << " inner fits did not converge";
            throw ConvergenceError(os.str());
        }
        if (cfg.retain_log_q) {
            est.log_q = std::move(log_q[q]);
        }
        out.push_back(std::move(est));
    }
    return out;
}

ComplexityEstimate estimate_comp(const RowPattern& gamma_i, std::size_t i, const ComplexityJobConfig& cfg) {
    const ComplexityJob job{i, gamma_i};
    return estimate_comp_batch(std::span<const ComplexityJob>(&job, 1), cfg).front();
}

Json CacheKey::to_json() const {
    return Json{{"schema", schema},
                {"dim", dim},
                {"horizon", horizon},
                {"beta", beta_digest},
                {"luckiness", hawkes_mdl::to_string(luckiness)},
                {"prior", prior_digest},
                {"n", n_samples},
                {"seed", seed},
                {"i", dim_index},
                {"pattern", pattern.to_string()}};
}

CacheKey CacheKey::from_json(const Json& j) {
    if (!j.is_object()) {
        throw ValidationError("cache key must be a JSON object");
    }
    require_known_keys(j, {"schema", "dim", "horizon", "beta", "luckiness", "prior", "n", "seed", "i", "pattern"},
                       "cache key");
    try {
        CacheKey key;
        key.schema = j.at("schema").get<int>();
        key.dim = j.at("dim").get<std::size_t>();
        key.horizon = j.at("horizon").get<double>();
        key.beta_digest = j.at("beta").get<std::string>();
        key.luckiness = parse_luckiness(j.at("luckiness").get<std::string>());
        key.prior_digest = j.at("prior").get<std::string>();
        key.n_samples = j.at("n").get<std::size_t>();
        key.seed = j.at("seed").get<std::uint64_t>();
        key.dim_index = j.at("i").get<std::size_t>();
        key.pattern = RowPattern::parse(j.at("pattern").get<std::string>());
        return key;
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("malformed cache key: ") + e.what());
    }
}

CacheKey make_cache_key(const ComplexityJobConfig& cfg, std::size_t i, const RowPattern& gamma_i) {
    CacheKey key;
    key.dim = cfg.dim;
    key.horizon = cfg.horizon;
    key.beta_digest = json_digest(Json(cfg.beta()));
    key.luckiness = cfg.luckiness.kind;
    key.prior_digest = json_digest(to_json(cfg.prior));
    key.n_samples = cfg.n_samples;
    key.seed = cfg.seed;
    key.dim_index = i;
    key.pattern = gamma_i;
    return key;
}

std::string ComplexityCache::record_line(const CacheKey& key, const ComplexityEstimate& est) {
    return Json{{"key", key.to_json()}, {"comp", est.comp}, {"stderr", est.std_error}, {"n", est.n_samples}}.dump();
}

ComplexityCache ComplexityCache::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open complexity cache " + path.string());
    }
    ComplexityCache cache;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            const Json rec = Json::parse(line);
            require_known_keys(rec, {"key", "comp", "stderr", "n"}, "cache record");
            const CacheKey key = CacheKey::from_json(rec.at("key"));
            ComplexityEstimate est;
            est.comp = rec.at("comp").get<double>();
            est.std_error = rec.at("stderr").get<double>();
            est.n_samples = rec.at("n").get<std::size_t>();
            cache.entries_.emplace(key.canonical(), est);
        } catch (const std::exception& e) {
            std::ostringstream os;
            os << path.string() << ":" << line_no << ": " << e.what();
            throw ValidationError(os.str());
        }
    }
    return cache;
}

std::optional<ComplexityEstimate> ComplexityCache::find(const CacheKey& key) const {
    auto it = entries_.find(key.canonical());
    if (it == entries_.end()) {
        return std::nullopt;
    }
    return it->second;
}

void ComplexityCache::insert(const CacheKey& key, const ComplexityEstimate& est) {
    if (path_) {
        std::ofstream out(*path_, std::ios::app | std::ios::binary);
        out << record_line(key, est) << '\n';
        out.flush();
        if (!out) {
            throw std::runtime_error("failed to append to complexity cache " + path_->string());
        }
    }
    ComplexityEstimate stored = est;
    stored.log_q.clear();
    entries_.insert_or_assign(key.canonical(), std::move(stored));
}

std::vector<CacheKey> missing_keys(const ComplexityJobConfig& cfg, const std::vector<std::vector<RowPattern>>& spaces,
                                   const ComplexityCache& cache) {
    std::vector<CacheKey> out;
    for (std::size_t i = 0; i < spaces.size(); ++i) {
        for (const auto& pattern : spaces[i]) {
            CacheKey key = make_cache_key(cfg, i, pattern);
            if (!cache.contains(key)) {
                out.push_back(std::move(key));
            }
        }
    }
    return out;
}

std::size_t precompute_cache(const ComplexityJobConfig& cfg, const std::vector<std::vector<RowPattern>>& spaces,
                             ComplexityCache& cache) {
    cfg.validate();
    if (spaces.size() != cfg.dim) {
        throw ValidationError("precompute needs one model space per dimension");
    }
    std::size_t added = 0;
    for (std::size_t i = 0; i < cfg.dim; ++i) {
        std::vector<ComplexityJob> jobs;
        std::set<RowPattern> seen;
        for (const auto& pattern : spaces[i]) {
            if (seen.insert(pattern).second && !cache.contains(make_cache_key(cfg, i, pattern))) {
                jobs.push_back({i, pattern});
            }
        }
        if (jobs.empty()) {
            continue;
        }
        const auto estimates = estimate_comp_batch(jobs, cfg);
        for (std::size_t q = 0; q < jobs.size(); ++q) {
            cache.insert(make_cache_key(cfg, i, jobs[q].pattern), estimates[q]);
            ++added;
        }
    }
    return added;
}

}  // namespace hawkes_mdl
