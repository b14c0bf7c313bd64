#include "hawkes_mdl/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hawkes_mdl {

namespace {

[[noreturn]] void fail(const std::string& message) { throw ValidationError(message); }

double number(const Json& j, std::string_view context) {
    if (!j.is_number()) {
        fail(std::string(context) + " must be a number");
    }
    return j.get<double>();
}

std::size_t integer(const Json& j, std::string_view context) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
        fail(std::string(context) + " must be a nonnegative integer");
    }
    return j.get<std::size_t>();
}

const Json& field(const Json& j, const char* key, std::string_view context) {
    auto it = j.find(key);
    if (it == j.end()) {
        fail(std::string(context) + " is missing required key '" + key + "'");
    }
    return *it;
}

Matrix matrix_from_json(const Json& j, std::string_view context) {
    if (!j.is_array()) {
        fail(std::string(context) + " must be an array of arrays");
    }
    Matrix out;
    for (const auto& row : j) {
        if (!row.is_array()) {
            fail(std::string(context) + " must be an array of arrays");
        }
        std::vector<double> r;
        for (const auto& v : row) {
            r.push_back(number(v, context));
        }
        out.push_back(std::move(r));
    }
    return out;
}

Interval interval_from_json(const Json& j, std::string_view context) {
    if (!j.is_array() || j.size() != 2) {
        fail(std::string(context) + " must be a two-element array [lo, hi]");
    }
    return {number(j[0], context), number(j[1], context)};
}

}  // namespace

Json to_json(const Provenance& p) { return Json{{"config_digest", p.config_digest}, {"seed", p.seed}}; }

Json to_json(const EventData& x, const std::optional<Provenance>& provenance) {
    Json j;
    j["horizon"] = x.horizon();
    j["dim"] = x.dim();
    j["events"] = x.all_events();
    if (provenance) {
        j["provenance"] = to_json(*provenance);
    }
    return j;
}

EventData event_data_from_json(const Json& j) {
    if (!j.is_object()) {
        fail("event data must be a JSON object");
    }
    require_known_keys(j, {"horizon", "dim", "events", "provenance"}, "event data");
    const double horizon = number(field(j, "horizon", "event data"), "horizon");
    const std::size_t dim = integer(field(j, "dim", "event data"), "dim");
    const Json& ev = field(j, "events", "event data");
    if (!ev.is_array()) {
        fail("events must be an array of arrays");
    }
    std::vector<std::vector<double>> events;
    for (const auto& seq : ev) {
        if (!seq.is_array()) {
            fail("events must be an array of arrays");
        }
        std::vector<double> s;
        s.reserve(seq.size());
        for (const auto& t : seq) {
            s.push_back(number(t, "event timestamp"));
        }
        events.push_back(std::move(s));
    }
    return EventData::validate(horizon, dim, std::move(events));
}

Json to_json(const Adjacency& a, const std::optional<Provenance>& provenance) {
    Json j;
    j["dim"] = a.dim();
    j["rows"] = a.to_matrix();
    if (provenance) {
        j["provenance"] = to_json(*provenance);
    }
    return j;
}

Adjacency adjacency_from_json(const Json& j) {
    if (!j.is_object()) {
        fail("adjacency must be a JSON object");
    }
    require_known_keys(j, {"dim", "rows", "provenance"}, "adjacency");
    const std::size_t dim = integer(field(j, "dim", "adjacency"), "dim");
    const Json& rows = field(j, "rows", "adjacency");
    if (!rows.is_array() || rows.size() != dim) {
        fail("adjacency rows must be an array of dim rows");
    }
    std::vector<std::vector<int>> m;
    for (const auto& row : rows) {
        if (!row.is_array()) {
            fail("adjacency rows must be arrays");
        }
        std::vector<int> r;
        for (const auto& v : row) {
            if (!v.is_number_integer()) {
                fail("adjacency entries must be 0 or 1");
            }
            r.push_back(v.get<int>());
        }
        m.push_back(std::move(r));
    }
    return Adjacency::from_matrix(m);
}

Json to_json(const ExpMhpParams& params) {
    return Json{{"mu", params.mu()}, {"alpha", params.alpha()}, {"beta", params.beta()}};
}

ExpMhpParams params_from_json(const Json& j) {
    if (!j.is_object()) {
        fail("parameters must be a JSON object");
    }
    require_known_keys(j, {"mu", "alpha", "beta", "provenance"}, "parameters");
    const Json& mu_j = field(j, "mu", "parameters");
    if (!mu_j.is_array()) {
        fail("mu must be an array");
    }
    std::vector<double> mu;
    for (const auto& v : mu_j) {
        mu.push_back(number(v, "mu"));
    }
    return ExpMhpParams(std::move(mu), matrix_from_json(field(j, "alpha", "parameters"), "alpha"),
                        matrix_from_json(field(j, "beta", "parameters"), "beta"));
}

Json to_json(const GenerativePrior& prior) {
    Json j;
    if (prior.scenario == ScenarioKind::Default) {
        j["scenario"] = "default";
        j["r"] = prior.edge_probability;
    } else {
        j["scenario"] = "sparse";
        j["m"] = prior.max_in_degree;
    }
    j["alpha_range"] = {prior.alpha_range.lo, prior.alpha_range.hi};
    j["mu_range"] = {prior.mu_range.lo, prior.mu_range.hi};
    if (prior.beta.is_constant()) {
        j["beta"] = prior.beta.constant_value();
    } else {
        j["beta"] = prior.beta.explicit_value();
    }
    j["self_excite"] = prior.self_excite;
    return j;
}

GenerativePrior generative_prior_from_json(const Json& j) {
    if (!j.is_object()) {
        fail("generative_prior must be a JSON object");
    }
    require_known_keys(j, {"scenario", "r", "m", "alpha_range", "mu_range", "beta", "self_excite"},
                       "generative_prior");
    GenerativePrior prior;
    const std::string scenario = j.value("scenario", std::string("default"));
    if (scenario == "default") {
        prior.scenario = ScenarioKind::Default;
        if (j.contains("m")) {
            fail("generative_prior: key 'm' applies only to the sparse scenario");
        }
        if (j.contains("r")) {
            prior.edge_probability = number(j["r"], "generative_prior.r");
        }
    } else if (scenario == "sparse") {
        prior.scenario = ScenarioKind::Sparse;
        if (j.contains("r")) {
            fail("generative_prior: key 'r' applies only to the default scenario");
        }
        if (j.contains("m")) {
            prior.max_in_degree = integer(j["m"], "generative_prior.m");
        }
    } else {
        fail("generative_prior.scenario must be 'default' or 'sparse'");
    }
    if (j.contains("alpha_range")) {
        prior.alpha_range = interval_from_json(j["alpha_range"], "generative_prior.alpha_range");
    }
    if (j.contains("mu_range")) {
        prior.mu_range = interval_from_json(j["mu_range"], "generative_prior.mu_range");
    }
    if (j.contains("beta")) {
        const Json& b = j["beta"];
        prior.beta = b.is_number() ? DecaySpec::constant(b.get<double>())
                                   : DecaySpec::explicit_matrix(matrix_from_json(b, "generative_prior.beta"));
    }
    if (j.contains("self_excite")) {
        if (!j["self_excite"].is_boolean()) {
            fail("generative_prior.self_excite must be a boolean");
        }
        prior.self_excite = j["self_excite"].get<bool>();
    }
    return prior;
}

Json to_json(const ComplexityEstimate& est) {
    Json j{{"comp", est.comp}, {"stderr", est.std_error}, {"n", est.n_samples}, {"non_converged", est.non_converged}};
    if (!est.log_q.empty()) {
        j["log_q"] = est.log_q;
    }
    return j;
}

Json to_json(const MdlScore& score) {
    return Json{{"total", score.total()},
                {"neg_log_prior", score.neg_log_prior()},
                {"neg_log_lik", score.neg_log_lik()},
                {"neg_log_luck", score.neg_log_luck()},
                {"comp", score.comp()}};
}

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string json_digest(const Json& j) { return fnv1a_hex(j.dump()); }

void require_known_keys(const Json& j, std::initializer_list<std::string_view> allowed, std::string_view context) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
            fail(std::string(context) + ": unknown key '" + it.key() + "'");
        }
    }
}

Json read_json_file(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        fail(path.string() + ": invalid JSON (" + e.what() + ")");
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

}  // namespace hawkes_mdl
