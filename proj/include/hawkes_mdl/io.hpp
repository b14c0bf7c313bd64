#pragma once

// JSON mirrors of the domain types and small file helpers.

#include "hawkes_mdl/model.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace hawkes_mdl {

using Json = nlohmann::json;

/// Provenance stamped into files written by the command-line tool.
struct Provenance {
    std::string config_digest;
    std::uint64_t seed = 0;
};

Json to_json(const EventData& x, const std::optional<Provenance>& provenance = std::nullopt);
/// Strict parse of {"horizon", "dim", "events"}; an optional "provenance" key is ignored.
EventData event_data_from_json(const Json& j);

Json to_json(const Adjacency& a, const std::optional<Provenance>& provenance = std::nullopt);
Adjacency adjacency_from_json(const Json& j);

Json to_json(const ExpMhpParams& params);
ExpMhpParams params_from_json(const Json& j);

Json to_json(const GenerativePrior& prior);
GenerativePrior generative_prior_from_json(const Json& j);

Json to_json(const ComplexityEstimate& est);
Json to_json(const MdlScore& score);
Json to_json(const Provenance& p);

/// 64-bit FNV-1a over the bytes, as 16 lower-case hex digits.
std::string fnv1a_hex(std::string_view bytes);
/// Digest of the canonical (sorted-key, compact) serialization.
std::string json_digest(const Json& j);

/// Rejects keys outside `allowed`, naming the offending key and `context`.
void require_known_keys(const Json& j, std::initializer_list<std::string_view> allowed, std::string_view context);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace hawkes_mdl
