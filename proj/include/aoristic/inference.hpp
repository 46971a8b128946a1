#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "aoristic/errors.hpp"
#include "aoristic/gamma.hpp"

namespace aoristic {

// One (context, interval) cell of the normalization problem: the aoristic
// evidence rate, the context's effective fieldwork exposure and intensity
// deficit, and the elicited prior rate.
struct RateCell {
    std::string context_id;
    std::int64_t interval_index = 0;
    double evidence_rate = 0.0; // E[X]_j, observed total / exposure
    double exposure = 0.0;      // t_i, effective duration
    double deficit = 0.0;       // tau_i
    double prior_rate = 0.0;    // y_j

    void validate() const {
        if (!(exposure > 0))
            throw validation_error("rate cell: exposure must be > 0");
        if (deficit < 0 || evidence_rate < 0 || prior_rate < 0)
            throw validation_error("rate cell: deficit, evidence rate and prior rate must be >= 0");
    }
};

// Gamma posterior in shape/rate parameterization. shape == 0 encodes the
// degenerate point mass at 0 (zero evidence and zero prior), which is routine
// for empty cells rather than an error.
struct GammaPosterior {
    double shape = 0.0;
    double rate = 1.0;

    double mean() const { return shape / rate; }
    double variance() const { return shape / (rate * rate); }
    bool degenerate() const { return shape == 0.0; }
};

// Conjugate Gamma-Poisson update: prior Gamma(tau*y, tau), Poisson evidence
// totalling exposure * evidence_rate over the exposure, posterior
// Gamma(t*E + tau*y, t + tau).
inline GammaPosterior posterior(const RateCell& cell) {
    cell.validate();
    return GammaPosterior{cell.exposure * cell.evidence_rate + cell.deficit * cell.prior_rate,
                          cell.exposure + cell.deficit};
}

// shape/rate, algebraically the convex combination w*E + (1-w)*y with
// w = t/(t + tau). At tau = 0 this is exactly the raw evidence rate.
inline double posterior_mean(const GammaPosterior& p) {
    return p.shape / p.rate;
}

struct CredibleInterval {
    double low = 0.0;
    double high = 0.0;
    bool degenerate = false;
};

// Equal-tailed interval cutting (1 - level)/2 from each tail. A degenerate
// posterior collapses to (0, 0) with the flag set.
inline CredibleInterval credible_interval(const GammaPosterior& p, double level) {
    if (!(level > 0.0 && level < 1.0))
        throw validation_error("credible level must lie in (0, 1), got " + std::to_string(level));
    if (p.degenerate())
        return CredibleInterval{0.0, 0.0, true};
    const double tail = (1.0 - level) / 2.0;
    return CredibleInterval{gamma_quantile(p.shape, p.rate, tail),
                           gamma_quantile(p.shape, p.rate, 1.0 - tail), false};
}

// Posterior means under a bracketing pair of prior rates, giving an interval
// estimate of the normalized rate.
inline std::pair<double, double> interval_estimate(RateCell cell, double y_low, double y_high) {
    if (y_low > y_high)
        throw validation_error("interval_estimate: y_low exceeds y_high");
    cell.prior_rate = y_low;
    const double lo = posterior_mean(posterior(cell));
    cell.prior_rate = y_high;
    const double hi = posterior_mean(posterior(cell));
    return {lo, hi};
}

} // namespace aoristic
