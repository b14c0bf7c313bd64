#include "hawkes_mdl/ingest.hpp"

#include "hawkes_mdl/io.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace hawkes_mdl {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        const auto first = cell.find_first_not_of(" \t\r");
        const auto last = cell.find_last_not_of(" \t\r");
        cells.push_back(first == std::string::npos ? std::string() : cell.substr(first, last - first + 1));
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

}  // namespace

void SeriesData::validate() const {
    if (values.empty()) {
        throw ValidationError("series needs at least one dimension");
    }
    const std::size_t n = length();
    for (const auto& row : values) {
        if (row.size() != n) {
            throw ValidationError("all series must have the same length");
        }
        for (double v : row) {
            if (std::isnan(v)) {
                throw ValidationError("series contains NaN");
            }
        }
    }
    if (samples_per_window < 1 || n <= samples_per_window) {
        std::ostringstream os;
        os << "series length " << n << " must exceed the window of " << samples_per_window << " samples";
        throw ValidationError(os.str());
    }
    if (!(quantile > 0.0 && quantile < 1.0)) {
        throw ValidationError("quantile fraction must lie in (0, 1)");
    }
}

EventData shocks_from_series(const SeriesData& series, double time_scale) {
    series.validate();
    if (!(time_scale > 0.0) || !std::isfinite(time_scale)) {
        throw ValidationError("time scale must be finite and positive");
    }
    const std::size_t w = series.samples_per_window;
    const std::size_t n = series.length();
    // 1-based ascending rank of the threshold order statistic.
    const auto rank = static_cast<std::size_t>(std::ceil((1.0 - series.quantile) * static_cast<double>(w) - 1e-9));
    const std::size_t threshold_index = std::clamp<std::size_t>(rank, 1, w) - 1;

    std::vector<std::vector<double>> events(series.dim());
    for (std::size_t i = 0; i < series.dim(); ++i) {
        const auto& row = series.values[i];
        std::multiset<double> window(row.begin() + 1, row.begin() + static_cast<std::ptrdiff_t>(w));
        for (std::size_t t = w; t < n; ++t) {
            window.insert(row[t]);
            const double threshold = *std::next(window.begin(), static_cast<std::ptrdiff_t>(threshold_index));
            if (row[t] > threshold) {
                events[i].push_back(static_cast<double>(t - w) * time_scale);
            }
            window.erase(window.find(row[t - w + 1]));
        }
    }
    return EventData::validate(static_cast<double>(n - w) * time_scale, series.dim(), std::move(events));
}

SeriesData parse_series_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    SeriesData series;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        auto cells = split_csv_line(line);
        if (series.names.empty()) {
            series.names = std::move(cells);
            series.values.assign(series.names.size(), {});
            continue;
        }
        if (cells.size() != series.names.size()) {
            std::ostringstream os;
            os << "line " << line_no << ": expected " << series.names.size() << " cells, got " << cells.size();
            throw ValidationError(os.str());
        }
        for (std::size_t i = 0; i < cells.size(); ++i) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(cells[i], &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != cells[i].size()) {
                std::ostringstream os;
                os << "line " << line_no << ": non-numeric cell '" << cells[i] << "'";
                throw ValidationError(os.str());
            }
            series.values[i].push_back(v);
        }
    }
    if (series.names.empty()) {
        throw ValidationError("series CSV is empty");
    }
    return series;
}

SeriesData read_series_csv(const std::filesystem::path& path) { return parse_series_csv(read_text_file(path)); }

}  // namespace hawkes_mdl
