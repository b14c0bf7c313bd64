#pragma once

// Shock identification: turn regularly sampled series into point-process events
// by flagging samples that land in the top quantile of their trailing window.

#include "hawkes_mdl/model.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace hawkes_mdl {

struct SeriesData {
    std::vector<std::string> names;
    Matrix values;  // p rows of n samples
    std::size_t samples_per_window = 250;
    double quantile = 0.20;

    std::size_t dim() const noexcept { return values.size(); }
    std::size_t length() const noexcept { return values.empty() ? 0 : values.front().size(); }
    void validate() const;
};

/// For t >= W, registers an event at time (t - W) * time_scale in dimension i iff
/// values[i][t] exceeds the order statistic of rank ceil((1 - q) W) (ascending)
/// of the window values[i][t-W+1 .. t]. Horizon is (n - W) * time_scale.
EventData shocks_from_series(const SeriesData& series, double time_scale = 1.0);

/// Header row of dimension names, then one numeric row per sample.
SeriesData read_series_csv(const std::filesystem::path& path);
SeriesData parse_series_csv(const std::string& text);

}  // namespace hawkes_mdl
