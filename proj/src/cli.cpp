#include "hawkes_mdl/cli.hpp"

#include "hawkes_mdl/evalharness.hpp"
#include "hawkes_mdl/ingest.hpp"
#include "hawkes_mdl/likelihood.hpp"
#include "hawkes_mdl/simulate.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace hawkes_mdl::cli {

namespace {

constexpr std::uint64_t kSimulateStreamTag = 0x53494d55;  // "SIMU"

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
    return buf;
}

template <typename T>
T get_strict(const Json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("config key '") + key + "' has the wrong type");
    }
}

std::size_t get_count(const Json& j, const char* key) {
    const Json& v = j.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
        throw ValidationError(std::string("config key '") + key + "' must be a nonnegative integer");
    }
    return v.get<std::size_t>();
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

struct Context {
    std::ostream& out;
    std::ostream& err;
    unsigned threads = 0;
};

RunConfig load_config(const std::string& path) {
    return path.empty() ? RunConfig{} : RunConfig::from_json(read_json_file(path));
}

// simulate accepts either a full run configuration or a bare generative prior.
RunConfig load_simulation_config(const std::string& path) {
    if (path.empty()) {
        return RunConfig{};
    }
    const Json j = read_json_file(path);
    if (j.is_object() && j.contains("scenario")) {
        RunConfig cfg;
        cfg.prior = generative_prior_from_json(j);
        return cfg;
    }
    return RunConfig::from_json(j);
}

int run_simulate(const Context& ctx, const std::string& config_path, std::optional<std::size_t> dim,
                 std::optional<double> horizon, std::optional<std::uint64_t> seed, const std::string& out_path,
                 const std::string& truth_path, const std::string& params_path) {
    RunConfig cfg = load_simulation_config(config_path);
    if (dim) {
        cfg.dim = dim;
    }
    if (horizon) {
        cfg.horizon = horizon;
    }
    if (seed) {
        cfg.seed = *seed;
    }
    if (!cfg.dim || !cfg.horizon) {
        throw ValidationError("simulate needs --dim and --horizon (or dim/horizon in the config)");
    }
    const SeedSpec root{cfg.seed, {kSimulateStreamTag}};
    const GroundTruth truth = draw_stationary_truth(cfg.prior, *cfg.dim, root.child(0));
    const EventData x = simulate(truth.params, *cfg.horizon, root.child(1));
    const Provenance prov{cfg.digest(), cfg.seed};
    write_json(out_path, to_json(x, prov));
    if (!truth_path.empty()) {
        write_json(truth_path, to_json(truth.graph, prov));
    }
    if (!params_path.empty()) {
        Json j = to_json(truth.params);
        j["provenance"] = to_json(prov);
        write_json(params_path, j);
    }
    ctx.err << "simulated " << x.total_count() << " events in " << x.dim() << " dimensions\n";
    return 0;
}

int run_nll(const Context& ctx, const std::string& params_path, const std::string& events_path,
            const std::string& out_path) {
    const ExpMhpParams params = params_from_json(read_json_file(params_path));
    const EventData x = event_data_from_json(read_json_file(events_path));
    if (params.dim() != x.dim()) {
        throw ValidationError("parameter and event dimensions differ");
    }
    Json rows = Json::array();
    for (std::size_t i = 0; i < x.dim(); ++i) {
        const double v = nll_dim(params.row(i), DimensionView(x, i, params.beta()[i]));
        rows.push_back(Json{{"dimension", i}, {"events", x.count(i)}, {"nll", v}});
    }
    const Json result{{"per_dimension", rows}, {"total", nll_total(params, x)}};
    if (out_path.empty()) {
        ctx.out << result.dump(2) << '\n';
    } else {
        write_json(out_path, result);
    }
    return 0;
}

int run_precompute(const Context& ctx, const std::string& config_path, std::optional<std::size_t> dim,
                   std::optional<double> horizon, const std::string& out_path, bool resume) {
    RunConfig cfg = load_config(config_path);
    if (dim) {
        cfg.dim = dim;
    }
    if (horizon) {
        cfg.horizon = horizon;
    }
    const ComplexityJobConfig job = cfg.complexity_config(ctx.threads);
    const auto spaces = enumerate_spaces(cfg.model_space(job.dim), job.dim);

    ComplexityCache cache;
    if (resume && std::filesystem::exists(out_path)) {
        cache = ComplexityCache::load(out_path);
    } else {
        write_text_file(out_path, "");
    }
    cache.attach(out_path);
    const std::size_t added = precompute_cache(job, spaces, cache);
    ctx.err << "complexity cache " << out_path << ": " << added << " new entries, " << cache.size() << " total\n";
    return 0;
}

std::string scores_csv(const DiscoveryResult& result, const Provenance& prov) {
    std::ostringstream os;
    os << "# config_digest=" << prov.config_digest << " seed=" << prov.seed << '\n';
    os << "dimension,pattern_bits,neg_log_prior,neg_log_lik,neg_log_luck,comp,total\n";
    for (std::size_t i = 0; i < result.tables.size(); ++i) {
        for (const auto& entry : result.tables[i]) {
            const MdlScore& s = entry.score;
            os << i << ',' << entry.pattern.to_string() << ',' << format_double(s.neg_log_prior()) << ','
               << format_double(s.neg_log_lik()) << ',' << format_double(s.neg_log_luck()) << ','
               << format_double(s.comp()) << ',' << (entry.converged ? format_double(s.total()) : "inf") << '\n';
        }
    }
    return os.str();
}

int run_discover(const Context& ctx, const std::string& events_path, const std::string& cache_path,
                 const std::string& config_path, const std::string& out_path, const std::string& scores_path) {
    const EventData x = event_data_from_json(read_json_file(events_path));
    RunConfig cfg = load_config(config_path);
    if (cfg.dim && *cfg.dim != x.dim()) {
        throw ValidationError("config dimension differs from the event data dimension");
    }
    cfg.dim = x.dim();
    if (!cfg.horizon) {
        cfg.horizon = x.horizon();
    }
    const ComplexityJobConfig job = cfg.complexity_config(ctx.threads);
    // An absent cache file is an empty cache, so the error names every missing key.
    const ComplexityCache cache =
        std::filesystem::exists(cache_path) ? ComplexityCache::load(cache_path) : ComplexityCache{};
    DiscoverOptions options;
    options.fit = cfg.fit;
    options.threads = ctx.threads;
    const auto spaces = enumerate_spaces(cfg.model_space(job.dim), job.dim);
    const DiscoveryResult result = discover(x, spaces, ModelPrior::uniform(), job, cache, options);
    const Provenance prov{cfg.digest(), cfg.seed};
    write_json(out_path, to_json(result.graph, prov));
    if (!scores_path.empty()) {
        write_text_file(scores_path, scores_csv(result, prov));
    }
    ctx.err << "discovered graph with " << result.graph.count() << " edges\n";
    return 0;
}

int run_benchmark_cmd(const Context& ctx, const std::string& config_path, const std::string& cache_path,
                      const std::string& out_path, const std::string& summary_path, std::optional<std::size_t> trials,
                      std::optional<double> horizon, std::optional<std::size_t> dim, bool paper_scale,
                      bool fill_cache) {
    RunConfig cfg = load_config(config_path);
    if (paper_scale) {
        cfg.dim = 7;
        cfg.n_samples = 1000;
        cfg.trials = 100;
        cfg.max_parents.reset();
        ctx.err << "paper-scale run: p = 7, N = 1000, 100 trials; expect hours of compute\n";
    }
    if (dim) {
        cfg.dim = dim;
    }
    if (horizon) {
        cfg.horizon = horizon;
    }
    if (trials) {
        cfg.trials = *trials;
    }
    BenchmarkConfig bench;
    bench.complexity = cfg.complexity_config(ctx.threads);
    bench.space = cfg.model_space(bench.complexity.dim);
    bench.n_trials = cfg.trials;
    bench.threads = ctx.threads;

    ComplexityCache cache;
    if (std::filesystem::exists(cache_path)) {
        cache = ComplexityCache::load(cache_path);
    } else if (!fill_cache) {
        throw ValidationError("cannot open complexity cache " + cache_path + " (use --fill-cache to create it)");
    }
    const auto spaces = enumerate_spaces(bench.space, bench.complexity.dim);
    if (fill_cache) {
        cache.attach(cache_path);
        precompute_cache(bench.complexity, spaces, cache);
    } else if (auto missing = missing_keys(bench.complexity, spaces, cache); !missing.empty()) {
        std::ostringstream os;
        os << "complexity cache is missing " << missing.size() << " entries (first: i=" << missing.front().dim_index
           << ", pattern=" << missing.front().pattern.to_string() << "); run precompute or pass --fill-cache";
        throw CacheMissError(os.str(), std::move(missing));
    }

    const BenchmarkReport report = run_benchmark(bench, cache);
    const Provenance prov{cfg.digest(), cfg.seed};
    write_text_file(out_path, results_csv(report.trials, prov));
    if (!summary_path.empty()) {
        write_json(summary_path, summary_json(report.summary, bench, prov));
    }
    for (const auto& t : report.trials) {
        if (!t.ok) {
            ctx.err << "trial " << t.trial << " failed: " << t.error << '\n';
        }
    }
    ctx.err << "mean F1 " << report.summary.mean_f1 << " (stderr " << report.summary.stderr_f1 << "), random "
            << report.summary.mean_random_f1 << ", failed trials " << report.summary.n_failed << '\n';
    return report.summary.n_failed == report.summary.n_trials ? 2 : 0;
}

int run_ingest(const Context& ctx, const std::string& csv_path, std::size_t window, double quantile,
               double time_scale, const std::string& out_path) {
    SeriesData series = read_series_csv(csv_path);
    series.samples_per_window = window;
    series.quantile = quantile;
    const EventData x = shocks_from_series(series, time_scale);
    write_json(out_path, to_json(x));
    ctx.err << "registered " << x.total_count() << " shocks across " << x.dim() << " series\n";
    return 0;
}

}  // namespace

RunConfig RunConfig::from_json(const Json& j) {
    if (!j.is_object()) {
        throw ValidationError("config must be a JSON object");
    }
    require_known_keys(j,
                       {"dim", "horizon", "seed", "n_samples", "trials", "generative_prior", "model_prior",
                        "luckiness", "model_space", "fit"},
                       "config");
    RunConfig cfg;
    if (j.contains("dim")) {
        cfg.dim = get_count(j, "dim");
    }
    if (j.contains("horizon")) {
        cfg.horizon = get_strict<double>(j, "horizon");
    }
    if (j.contains("seed")) {
        cfg.seed = get_strict<std::uint64_t>(j, "seed");
    }
    if (j.contains("n_samples")) {
        cfg.n_samples = get_count(j, "n_samples");
    }
    if (j.contains("trials")) {
        cfg.trials = get_count(j, "trials");
    }
    if (j.contains("generative_prior")) {
        cfg.prior = generative_prior_from_json(j["generative_prior"]);
    }
    if (j.contains("model_prior") && get_strict<std::string>(j, "model_prior") != "uniform") {
        throw ValidationError("config: model_prior must be 'uniform'");
    }
    if (j.contains("luckiness")) {
        cfg.luckiness.kind = parse_luckiness(get_strict<std::string>(j, "luckiness"));
    }
    if (j.contains("model_space")) {
        const Json& s = j["model_space"];
        if (!s.is_object()) {
            throw ValidationError("config: model_space must be an object");
        }
        require_known_keys(s, {"kind", "max_parents", "force_self"}, "config.model_space");
        cfg.space_kind = s.contains("kind") ? get_strict<std::string>(s, "kind") : "sparse_bounded";
        if (cfg.space_kind == "full") {
            if (s.contains("max_parents") || s.contains("force_self")) {
                throw ValidationError("config.model_space: the full space takes no max_parents or force_self");
            }
            cfg.force_self = false;
        } else if (cfg.space_kind == "sparse_bounded") {
            if (s.contains("max_parents")) {
                cfg.max_parents = get_count(s, "max_parents");
            }
            if (s.contains("force_self")) {
                cfg.force_self = get_strict<bool>(s, "force_self");
            }
        } else {
            throw ValidationError("config.model_space.kind must be 'full' or 'sparse_bounded'");
        }
    }
    if (j.contains("fit")) {
        const Json& f = j["fit"];
        if (!f.is_object()) {
            throw ValidationError("config: fit must be an object");
        }
        require_known_keys(f, {"tol", "max_iter"}, "config.fit");
        if (f.contains("tol")) {
            cfg.fit.tol = get_strict<double>(f, "tol");
        }
        if (f.contains("max_iter")) {
            cfg.fit.max_iter = get_count(f, "max_iter");
        }
        cfg.fit.validate();
    }
    return cfg;
}

Json RunConfig::to_json() const {
    Json j;
    j["dim"] = dim ? Json(*dim) : Json(nullptr);
    j["horizon"] = horizon ? Json(*horizon) : Json(nullptr);
    j["seed"] = seed;
    j["n_samples"] = n_samples;
    j["trials"] = trials;
    j["generative_prior"] = hawkes_mdl::to_json(prior);
    j["model_prior"] = "uniform";
    j["luckiness"] = hawkes_mdl::to_string(luckiness.kind);
    Json space{{"kind", space_kind}};
    if (space_kind != "full") {
        space["max_parents"] = max_parents ? Json(*max_parents) : Json(nullptr);
        space["force_self"] = force_self;
    }
    j["model_space"] = space;
    j["fit"] = Json{{"tol", fit.tol}, {"max_iter", fit.max_iter}};
    return j;
}

ModelSpace RunConfig::model_space(std::size_t dim) const {
    if (space_kind == "full") {
        return ModelSpace::full();
    }
    return ModelSpace::sparse_bounded(max_parents.value_or(dim - 1), force_self);
}

ComplexityJobConfig RunConfig::complexity_config(unsigned threads) const {
    if (!dim || !horizon) {
        throw ValidationError("dimension and horizon must be set (config keys dim/horizon or flags)");
    }
    ComplexityJobConfig job;
    job.dim = *dim;
    job.horizon = *horizon;
    job.prior = prior;
    job.luckiness = luckiness;
    job.n_samples = n_samples;
    job.seed = seed;
    job.fit = fit;
    job.threads = threads;
    job.validate();
    return job;
}

unsigned resolve_threads(std::optional<unsigned> flag) {
    if (flag) {
        return *flag;
    }
    if (const char* env = std::getenv("HAWKES_MDL_THREADS"); env && *env) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end && *end == '\0') {
            return static_cast<unsigned>(v);
        }
        throw ValidationError("HAWKES_MDL_THREADS must be a nonnegative integer");
    }
    return 0;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Granger-causal graph discovery for exponential Hawkes processes by minimum description length",
                 "hawkes-mdl"};
    app.set_version_flag("--version", std::string("hawkes-mdl ") + HAWKES_MDL_VERSION + " (cache schema " +
                                          std::to_string(kCacheSchemaVersion) + ")");
    app.require_subcommand(1);
    unsigned threads_flag = 0;
    auto* threads_opt = app.add_option("--threads", threads_flag, "Worker threads (default: all available)");

    std::string config_path;
    std::string out_path;
    std::string events_path;
    std::string cache_path;
    std::optional<std::size_t> dim;
    std::optional<double> horizon;
    std::optional<std::uint64_t> seed;

    auto* sim = app.add_subcommand("simulate", "Draw a ground-truth process and simulate one realization");
    sim->add_option("--config", config_path, "Run configuration (JSON)")->check(CLI::ExistingFile);
    sim->add_option("--dim", dim, "Number of dimensions");
    sim->add_option("--horizon", horizon, "Observation horizon T");
    sim->add_option("--seed", seed, "Master seed");
    sim->add_option("--out", out_path, "Event data output (JSON)")->required();
    std::string truth_path;
    std::string params_path;
    sim->add_option("--truth", truth_path, "Write the ground-truth adjacency (JSON)");
    sim->add_option("--params-out", params_path, "Write the ground-truth parameters (JSON)");

    auto* nll = app.add_subcommand("nll", "Per-dimension negative log-likelihood of parameters on event data");
    std::string nll_params;
    nll->add_option("--params", nll_params, "Parameters (JSON with mu, alpha, beta)")->required();
    nll->add_option("--events", events_path, "Event data (JSON)")->required();
    nll->add_option("--out", out_path, "Output file (default: standard output)");

    auto* pre = app.add_subcommand("precompute", "Estimate and store model complexities for every row pattern");
    pre->add_option("--config", config_path, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
    pre->add_option("--out", out_path, "Complexity cache (JSON lines)")->required();
    pre->add_option("--dim", dim, "Number of dimensions");
    pre->add_option("--horizon", horizon, "Observation horizon T");
    bool resume = false;
    pre->add_flag("--resume", resume, "Keep existing entries and compute only missing ones");

    auto* disc = app.add_subcommand("discover", "Infer the causal graph of one realization");
    disc->add_option("--events", events_path, "Event data (JSON)")->required();
    disc->add_option("--cache", cache_path, "Complexity cache (JSON lines)")->required();
    disc->add_option("--config", config_path, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
    disc->add_option("--out", out_path, "Adjacency output (JSON)")->required();
    std::string scores_path;
    disc->add_option("--scores", scores_path, "Per-pattern score table (CSV)");

    auto* bench = app.add_subcommand("benchmark", "Synthetic evaluation: simulate, discover, score with F1");
    bench->add_option("--config", config_path, "Run configuration (JSON)")->check(CLI::ExistingFile);
    bench->add_option("--cache", cache_path, "Complexity cache (JSON lines)")->required();
    bench->add_option("--out", out_path, "Per-trial results (CSV)")->required();
    std::string summary_path;
    bench->add_option("--summary", summary_path, "Summary (JSON)");
    std::optional<std::size_t> trials;
    bench->add_option("--trials", trials, "Number of trials");
    bench->add_option("--horizon", horizon, "Observation horizon T");
    bench->add_option("--dim", dim, "Number of dimensions");
    bool paper_scale = false;
    bench->add_flag("--paper-scale", paper_scale, "p = 7, N = 1000, 100 trials (long-running)");
    bool fill_cache = false;
    bench->add_flag("--fill-cache", fill_cache, "Compute missing complexity entries into the cache first");

    auto* ing = app.add_subcommand("ingest", "Convert sampled series to events by rolling-window shock detection");
    std::string csv_path;
    std::size_t window = 250;
    double quantile = 0.2;
    double time_scale = 1.0;
    ing->add_option("--csv", csv_path, "Input series (CSV with a header row)")->required();
    ing->add_option("--window", window, "Samples per rolling window")->required();
    ing->add_option("--quantile", quantile, "Top fraction that counts as a shock")->required();
    ing->add_option("--time-scale", time_scale, "Time units per sample");
    ing->add_option("--out", out_path, "Event data output (JSON)")->required();

    for (auto* sub : {sim, nll, pre, disc, bench, ing}) {
        sub->fallthrough();
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        std::optional<unsigned> flag;
        if (threads_opt->count() > 0) {
            flag = threads_flag;
        }
        const Context ctx{out, err, resolve_threads(flag)};
        if (ctx.threads > 0) {
            omp_set_num_threads(static_cast<int>(ctx.threads));
        }
        if (*sim) {
            return run_simulate(ctx, config_path, dim, horizon, seed, out_path, truth_path, params_path);
        }
        if (*nll) {
            return run_nll(ctx, nll_params, events_path, out_path);
        }
        if (*pre) {
            return run_precompute(ctx, config_path, dim, horizon, out_path, resume);
        }
        if (*disc) {
            return run_discover(ctx, events_path, cache_path, config_path, out_path, scores_path);
        }
        if (*bench) {
            return run_benchmark_cmd(ctx, config_path, cache_path, out_path, summary_path, trials, horizon, dim,
                                     paper_scale, fill_cache);
        }
        if (*ing) {
            return run_ingest(ctx, csv_path, window, quantile, time_scale, out_path);
        }
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

}  // namespace hawkes_mdl::cli
