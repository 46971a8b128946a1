#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "aoristic/errors.hpp"

namespace aoristic {

// Contiguous, equal-width, half-open intervals on a signed integer year axis.
// Interval j covers [start_year + j*width, start_year + (j+1)*width), so each
// year belongs to exactly one interval.
struct TimeGrid {
    std::int64_t start_year = 0;
    std::int64_t interval_width = 1;
    std::int64_t interval_count = 1;

    std::int64_t end_year() const { return start_year + interval_width * interval_count; }
    std::int64_t interval_begin(std::int64_t j) const { return start_year + j * interval_width; }
    std::int64_t interval_end(std::int64_t j) const { return start_year + (j + 1) * interval_width; }

    // Inclusive-year label, e.g. "1..25" for the half-open interval [1, 26).
    std::string interval_label(std::int64_t j) const {
        return std::to_string(interval_begin(j)) + ".." + std::to_string(interval_end(j) - 1);
    }

    bool operator==(const TimeGrid&) const = default;
};

inline TimeGrid build_grid(std::int64_t start_year, std::int64_t end_year,
                           std::int64_t interval_width) {
    if (interval_width < 1)
        throw validation_error("interval width must be >= 1, got " +
                               std::to_string(interval_width));
    if (end_year <= start_year)
        throw validation_error("end year " + std::to_string(end_year) +
                               " must be after start year " + std::to_string(start_year));
    const std::int64_t span = end_year - start_year;
    const std::int64_t rem = span % interval_width;
    if (rem != 0)
        throw validation_error("grid span " + std::to_string(span) +
                               " is not divisible by interval width " +
                               std::to_string(interval_width) + " (remainder " +
                               std::to_string(rem) + ")");
    return TimeGrid{start_year, interval_width, span / interval_width};
}

// One dated find class. The count is a non-negative real; fractional values
// arise from vessel-equivalent measures. Use dates are inclusive years.
struct FindRecord {
    std::string find_id;
    std::string context_id;
    double count = 0.0;
    std::int64_t use_start = 0;
    std::int64_t use_end = 0;

    void validate() const {
        if (count < 0)
            throw validation_error("find '" + find_id + "': count must be >= 0");
        if (use_start > use_end)
            throw validation_error("find '" + find_id + "': use_start " +
                                   std::to_string(use_start) + " exceeds use_end " +
                                   std::to_string(use_end));
    }
};

// Per-interval date probabilities for one find. `clipped` is the probability
// mass falling outside the grid span; it is reported, never renormalized away.
struct AoristicWeights {
    std::string find_id;
    std::vector<double> weights;
    double clipped = 0.0;
};

// Per-interval expected find quantities for one context.
// `clipped_count` is the count-weighted mass that fell outside the grid.
struct AoristicSeries {
    std::string context_id;
    std::vector<double> expected;
    double clipped_count = 0.0;

    double total() const {
        double s = 0.0;
        for (double v : expected) s += v;
        return s;
    }
};

// Distributes a find's unit mass uniformly over its use span [use_start,
// use_end] (treated as the year range [use_start, use_end + 1)) and assigns to
// each grid interval the fraction of years it overlaps. When the span aligns
// with whole intervals this reduces to 1/(number of covered intervals).
inline AoristicWeights aoristic_weights(const FindRecord& find, const TimeGrid& grid) {
    find.validate();
    const std::int64_t span_begin = find.use_start;
    const std::int64_t span_end = find.use_end + 1; // half-open in years
    const double duration = static_cast<double>(span_end - span_begin);

    if (span_end <= grid.start_year || span_begin >= grid.end_year())
        throw validation_error("find '" + find.find_id + "' dated " +
                               std::to_string(find.use_start) + ".." +
                               std::to_string(find.use_end) +
                               " lies entirely outside the grid span " +
                               std::to_string(grid.start_year) + ".." +
                               std::to_string(grid.end_year() - 1));

    AoristicWeights out;
    out.find_id = find.find_id;
    out.weights.assign(static_cast<std::size_t>(grid.interval_count), 0.0);

    double inside = 0.0;
    // Only intervals overlapping the span can be nonzero.
    std::int64_t j_first = (span_begin - grid.start_year) / grid.interval_width;
    if (span_begin < grid.start_year) j_first = 0;
    std::int64_t j_last = (span_end - 1 - grid.start_year) / grid.interval_width;
    if (j_last >= grid.interval_count) j_last = grid.interval_count - 1;
    for (std::int64_t j = j_first; j <= j_last; ++j) {
        const std::int64_t lo = std::max(span_begin, grid.interval_begin(j));
        const std::int64_t hi = std::min(span_end, grid.interval_end(j));
        if (hi <= lo) continue;
        const double w = static_cast<double>(hi - lo) / duration;
        out.weights[static_cast<std::size_t>(j)] = w;
        inside += static_cast<double>(hi - lo);
    }
    out.clipped = (duration - inside) / duration;
    return out;
}

// E[X]_j per context: sum over finds of count x weight_j. Contexts listed in
// `declared_contexts` appear in the output even when no find references them.
inline std::map<std::string, AoristicSeries>
expected_values(std::span<const FindRecord> finds, const TimeGrid& grid,
                std::span<const std::string> declared_contexts = {}) {
    std::map<std::string, AoristicSeries> out;
    auto series_for = [&](const std::string& context_id) -> AoristicSeries& {
        auto [it, inserted] = out.try_emplace(context_id);
        if (inserted) {
            it->second.context_id = context_id;
            it->second.expected.assign(static_cast<std::size_t>(grid.interval_count), 0.0);
        }
        return it->second;
    };
    for (const auto& id : declared_contexts) series_for(id);
    for (const auto& find : finds) {
        const AoristicWeights w = aoristic_weights(find, grid);
        AoristicSeries& series = series_for(find.context_id);
        for (std::size_t j = 0; j < w.weights.size(); ++j)
            series.expected[j] += find.count * w.weights[j];
        series.clipped_count += find.count * w.clipped;
    }
    return out;
}

} // namespace aoristic
