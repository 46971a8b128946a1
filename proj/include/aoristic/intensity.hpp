#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>

#include "aoristic/errors.hpp"

namespace aoristic {

// A collection context (site, excavation, survey area, stratigraphic unit)
// with its fieldwork duration in user-consistent effort units. The staffing
// scalar folds project size into the effective duration.
struct ContextRecord {
    std::string context_id;
    double duration = 0.0;
    double staffing = 1.0;

    void validate() const {
        if (!(duration > 0))
            throw validation_error("context '" + context_id + "': duration must be > 0");
        if (!(staffing > 0))
            throw validation_error("context '" + context_id + "': staffing must be > 0");
    }
};

inline double effective_duration(const ContextRecord& context) {
    context.validate();
    return context.duration * context.staffing;
}

struct ContextIntensity {
    double effective_duration = 0.0;
    double deficit = 0.0;
};

// Per-context effective durations and deficits against a shared baseline.
// The baseline is the maximum effective duration in the set unless a larger
// override was supplied; effective_duration + deficit == baseline everywhere.
struct IntensityProfile {
    double baseline = 0.0;
    std::map<std::string, ContextIntensity> contexts;

    const ContextIntensity& at(const std::string& context_id) const {
        auto it = contexts.find(context_id);
        if (it == contexts.end())
            throw validation_error("unknown context '" + context_id + "'");
        return it->second;
    }
};

// deficit_i = baseline - effective_duration_i, the fieldwork time that would
// equalize collection effort across the set.
inline IntensityProfile
compute_deficits(std::span<const ContextRecord> contexts,
                 std::optional<double> baseline_override = std::nullopt) {
    if (contexts.empty())
        throw validation_error("cannot compute intensity deficits for an empty context set");

    IntensityProfile profile;
    double max_effective = 0.0;
    for (const auto& ctx : contexts) {
        const double eff = effective_duration(ctx);
        auto [it, inserted] = profile.contexts.try_emplace(ctx.context_id);
        if (!inserted)
            throw validation_error("duplicate context id '" + ctx.context_id + "'");
        it->second.effective_duration = eff;
        max_effective = std::max(max_effective, eff);
    }
    profile.baseline = max_effective;
    if (baseline_override) {
        if (*baseline_override < max_effective)
            throw validation_error(
                "baseline override " + std::to_string(*baseline_override) +
                " is below the maximum effective duration " + std::to_string(max_effective));
        profile.baseline = *baseline_override;
    }
    for (auto& [id, ci] : profile.contexts)
        ci.deficit = profile.baseline - ci.effective_duration;
    return profile;
}

} // namespace aoristic
