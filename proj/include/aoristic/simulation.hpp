#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "aoristic/errors.hpp"
#include "aoristic/gamma.hpp"
#include "aoristic/inference.hpp"
#include "aoristic/priors.hpp"

namespace aoristic {

// SplitMix64 stream. Each (seed, replicate) pair derives an independent
// stream, so replicates can be evaluated concurrently and still reproduce
// bit-identically.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static SplitMix64 for_replicate(std::uint64_t seed, std::uint64_t replicate) {
        SplitMix64 mixer(seed);
        std::uint64_t a = mixer.next_u64();
        // fold the replicate index through one more mixing round
        SplitMix64 stream(a ^ (replicate * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL));
        stream.next_u64();
        return stream;
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in (0, 1); never returns exactly 0
    double next_double() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

private:
    std::uint64_t state_;
};

namespace detail {

// Knuth product method; exp(-mean) stays representable for mean < ~700, used
// only below the PTRS threshold.
inline std::uint64_t poisson_small(double mean, SplitMix64& rng) {
    const double limit = std::exp(-mean);
    double prod = rng.next_double();
    std::uint64_t k = 0;
    while (prod > limit) {
        prod *= rng.next_double();
        ++k;
    }
    return k;
}

// Hormann's PTRS transformed-rejection sampler for mean >= 10.
inline std::uint64_t poisson_ptrs(double mean, SplitMix64& rng) {
    const double log_mean = std::log(mean);
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = rng.next_double() - 0.5;
        const double v = rng.next_double();
        const double us = 0.5 - std::fabs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r)
            return static_cast<std::uint64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us))
            continue;
        const double k = kf;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            k * log_mean - mean - std::lgamma(k + 1.0))
            return static_cast<std::uint64_t>(kf);
    }
}

} // namespace detail

inline std::uint64_t sample_poisson(double mean, SplitMix64& rng) {
    if (!(mean >= 0) || !std::isfinite(mean))
        throw validation_error("sample_poisson: mean must be a finite non-negative real");
    if (mean == 0.0) return 0;
    if (mean < 30.0) return detail::poisson_small(mean, rng);
    return detail::poisson_ptrs(mean, rng);
}

// A synthetic experiment with known ground truth: per-interval true rates,
// per-context exposures, and a prior elicitation strategy applied to each
// replicate's simulated evidence.
struct SimulationSpec {
    std::vector<double> true_rates; // lambda_j per interval
    std::vector<double> exposures;  // t_i per context
    PriorStrategy prior_strategy;
    std::uint64_t replicates = 1;
    std::uint64_t seed = 0;

    void validate() const {
        if (replicates < 1)
            throw validation_error("simulation: replicates must be >= 1");
        if (true_rates.empty() || exposures.empty())
            throw validation_error("simulation: true rates and exposures must be non-empty");
        for (double r : true_rates)
            if (!(r >= 0))
                throw validation_error("simulation: true rates must be >= 0");
        for (double t : exposures)
            if (!(t > 0))
                throw validation_error("simulation: exposures must be > 0");
        prior_strategy.validate();
    }
};

// counts[replicate][context][interval] ~ Poisson(lambda_j * t_i), reproducible
// from the seed alone.
inline std::vector<std::vector<std::vector<std::uint64_t>>>
simulate_counts(const SimulationSpec& spec) {
    spec.validate();
    std::vector<std::vector<std::vector<std::uint64_t>>> counts(spec.replicates);
    for (std::uint64_t rep = 0; rep < spec.replicates; ++rep) {
        SplitMix64 rng = SplitMix64::for_replicate(spec.seed, rep);
        auto& per_context = counts[rep];
        per_context.resize(spec.exposures.size());
        for (std::size_t i = 0; i < spec.exposures.size(); ++i) {
            per_context[i].resize(spec.true_rates.size());
            for (std::size_t j = 0; j < spec.true_rates.size(); ++j)
                per_context[i][j] = sample_poisson(spec.true_rates[j] * spec.exposures[i], rng);
        }
    }
    return counts;
}

struct OracleMoments {
    double mean = 0.0;
    double variance = 0.0;
    bool degenerate = false;
};

// Brute-force check of the conjugate algebra: evaluates prior density
// Gamma(tau*y, tau) times the Poisson likelihood of the real-valued total
// t*E over exposure t on a lambda grid and integrates by trapezoid.
//
// The observed total t*E enters the log-likelihood through the gamma function
// in place of a factorial. Shapes below 1 carry an integrable singularity at
// lambda = 0, removed by the substitution lambda = u^m with m chosen so the
// transformed integrand vanishes at 0.
inline OracleMoments grid_posterior_oracle(double evidence_rate, double exposure,
                                           double deficit, double prior_rate,
                                           std::size_t resolution = 200000) {
    RateCell cell{"", 0, evidence_rate, exposure, deficit, prior_rate};
    cell.validate();
    if (resolution < 10000)
        throw validation_error("oracle: grid resolution must be >= 10000 points");

    const double shape = exposure * evidence_rate + deficit * prior_rate;
    const double rate = exposure + deficit;
    if (shape == 0.0)
        return OracleMoments{0.0, 0.0, true};

    const double total = exposure * evidence_rate; // observed Poisson total
    const double m = std::max(1.0, std::ceil(2.0 / shape));
    const double lambda_max =
        shape / rate + 12.0 * std::sqrt(shape) / rate; // mean + 12 posterior sd
    const double u_max = std::pow(lambda_max, 1.0 / m);
    const double du = u_max / static_cast<double>(resolution);

    auto log_integrand = [&](double lambda) {
        // unnormalized prior Gamma(tau*y, tau) plus Poisson log-likelihood
        double lp = (deficit * prior_rate - 1.0) * std::log(lambda) - deficit * lambda;
        double ll = total * std::log(exposure * lambda) - exposure * lambda -
                    std::lgamma(total + 1.0);
        return lp + ll;
    };

    // peak of the transformed integrand, for overflow-safe scaling
    const double log_scale =
        log_integrand(shape / rate) + (m - 1.0) * std::log(std::max(u_max / 2.0, 1e-300));

    double z0 = 0.0, z1 = 0.0, z2 = 0.0;
    for (std::size_t i = 0; i <= resolution; ++i) {
        const double u = du * static_cast<double>(i);
        double f = 0.0, lambda = 0.0;
        if (u > 0.0) {
            lambda = std::pow(u, m);
            const double lf = log_integrand(lambda) + (m - 1.0) * std::log(u) - log_scale;
            f = std::exp(lf);
        }
        const double w = (i == 0 || i == resolution) ? 0.5 : 1.0;
        z0 += w * f;
        z1 += w * f * lambda;
        z2 += w * f * lambda * lambda;
    }
    if (!(z0 > 0.0) || !std::isfinite(z0))
        return OracleMoments{0.0, 0.0, true};

    const double mean = z1 / z0;
    const double variance = z2 / z0 - mean * mean;
    return OracleMoments{mean, variance, false};
}

struct CoverageCell {
    std::size_t context_index = 0;
    std::size_t interval_index = 0;
    double coverage = 0.0; // fraction of replicates whose interval contains lambda_j
};

// Monte Carlo coverage of equal-tailed credible intervals against the known
// ground truth. The prior is re-elicited per replicate from the simulated
// evidence series, so data-dependent strategies behave as they would on real
// catalogs.
inline std::vector<CoverageCell> coverage_experiment(const SimulationSpec& spec, double level) {
    spec.validate();
    if (!(level > 0.0 && level < 1.0))
        throw validation_error("coverage: level must lie in (0, 1)");

    const std::size_t n_ctx = spec.exposures.size();
    const std::size_t n_int = spec.true_rates.size();
    const double max_exposure = *std::max_element(spec.exposures.begin(), spec.exposures.end());

    std::vector<std::uint64_t> hits(n_ctx * n_int, 0);
    const auto counts = simulate_counts(spec);
    for (const auto& per_context : counts) {
        std::vector<AoristicSeries> series(n_ctx);
        for (std::size_t i = 0; i < n_ctx; ++i) {
            series[i].context_id = std::to_string(i);
            series[i].expected.resize(n_int);
            for (std::size_t j = 0; j < n_int; ++j)
                series[i].expected[j] =
                    static_cast<double>(per_context[i][j]) / spec.exposures[i];
        }
        const std::vector<double> y = elicit(spec.prior_strategy, series, n_int);
        for (std::size_t i = 0; i < n_ctx; ++i) {
            const double deficit = max_exposure - spec.exposures[i];
            for (std::size_t j = 0; j < n_int; ++j) {
                RateCell cell{series[i].context_id, static_cast<std::int64_t>(j),
                              series[i].expected[j], spec.exposures[i], deficit, y[j]};
                const CredibleInterval ci = credible_interval(posterior(cell), level);
                const double truth = spec.true_rates[j];
                if (!ci.degenerate && ci.low <= truth && truth <= ci.high)
                    ++hits[i * n_int + j];
                else if (ci.degenerate && truth == 0.0)
                    ++hits[i * n_int + j];
            }
        }
    }

    std::vector<CoverageCell> out;
    out.reserve(n_ctx * n_int);
    for (std::size_t i = 0; i < n_ctx; ++i)
        for (std::size_t j = 0; j < n_int; ++j)
            out.push_back(CoverageCell{i, j,
                                       static_cast<double>(hits[i * n_int + j]) /
                                           static_cast<double>(spec.replicates)});
    return out;
}

} // namespace aoristic
