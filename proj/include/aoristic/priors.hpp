#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "aoristic/chronology.hpp"
#include "aoristic/errors.hpp"

namespace aoristic {

enum class PriorKind { Zero, RegionalMean, MaxExpected, Fixed };

// How the per-interval prior rate y_j is elicited. Fixed accepts either a
// single constant or a full per-interval vector, covering external regional
// baselines and the global-scalar reading of "maximum E[X]".
struct PriorStrategy {
    PriorKind kind = PriorKind::Zero;
    std::vector<double> fixed_values; // size 1 (constant) or interval_count

    static PriorStrategy zero() { return {PriorKind::Zero, {}}; }
    static PriorStrategy regional_mean() { return {PriorKind::RegionalMean, {}}; }
    static PriorStrategy max_expected() { return {PriorKind::MaxExpected, {}}; }
    static PriorStrategy fixed(double value) { return {PriorKind::Fixed, {value}}; }
    static PriorStrategy fixed(std::vector<double> values) {
        return {PriorKind::Fixed, std::move(values)};
    }

    void validate() const {
        if (kind == PriorKind::Fixed) {
            if (fixed_values.empty())
                throw validation_error("fixed prior strategy requires a value");
            for (double v : fixed_values)
                if (!(v >= 0))
                    throw validation_error("fixed prior values must be >= 0");
        }
    }
};

// Per-interval prior rate vector from the declared strategy over the analyzed
// context series. All series must share one grid (equal interval counts).
inline std::vector<double> elicit(const PriorStrategy& strategy,
                                  std::span<const AoristicSeries> series,
                                  std::size_t interval_count) {
    strategy.validate();
    for (const auto& s : series)
        if (s.expected.size() != interval_count)
            throw validation_error("context '" + s.context_id + "' has " +
                                   std::to_string(s.expected.size()) +
                                   " intervals, expected " + std::to_string(interval_count) +
                                   " (grid mismatch)");

    std::vector<double> y(interval_count, 0.0);
    switch (strategy.kind) {
    case PriorKind::Zero:
        break;
    case PriorKind::RegionalMean:
        if (series.empty())
            throw validation_error("regional-mean prior requires at least one context series");
        for (const auto& s : series)
            for (std::size_t j = 0; j < interval_count; ++j) y[j] += s.expected[j];
        for (auto& v : y) v /= static_cast<double>(series.size());
        break;
    case PriorKind::MaxExpected:
        if (series.empty())
            throw validation_error("max-expected prior requires at least one context series");
        for (const auto& s : series)
            for (std::size_t j = 0; j < interval_count; ++j) y[j] = std::max(y[j], s.expected[j]);
        break;
    case PriorKind::Fixed:
        if (strategy.fixed_values.size() == 1) {
            std::fill(y.begin(), y.end(), strategy.fixed_values[0]);
        } else if (strategy.fixed_values.size() == interval_count) {
            y = strategy.fixed_values;
        } else {
            throw validation_error("fixed prior has " +
                                   std::to_string(strategy.fixed_values.size()) +
                                   " values; expected 1 or " + std::to_string(interval_count));
        }
        break;
    }
    return y;
}

} // namespace aoristic
