#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "aoristic/simulation.hpp"

using namespace aoristic;

TEST_CASE("zero-rate intervals never produce counts") {
    SimulationSpec spec{{0.0, 2.0}, {5.0}, PriorStrategy::zero(), 50, 123};
    const auto counts = simulate_counts(spec);
    for (const auto& per_context : counts)
        CHECK(per_context[0][0] == 0);
}

TEST_CASE("sample mean of Poisson counts matches lambda t") {
    SimulationSpec spec{{2.0}, {5.0}, PriorStrategy::zero(), 10000, 42};
    const auto counts = simulate_counts(spec);
    double sum = 0.0;
    for (const auto& per_context : counts) sum += static_cast<double>(per_context[0][0]);
    CHECK(sum / 10000.0 == Catch::Approx(10.0).margin(0.3));
}

TEST_CASE("large-mean sampler also matches its mean and variance") {
    SplitMix64 rng(7);
    const double mean = 250.0;
    double sum = 0.0, sumsq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double k = static_cast<double>(sample_poisson(mean, rng));
        sum += k;
        sumsq += k * k;
    }
    const double m = sum / n;
    const double v = sumsq / n - m * m;
    CHECK(m == Catch::Approx(mean).margin(0.5));
    CHECK(v == Catch::Approx(mean).epsilon(0.05));
}

TEST_CASE("identical specs reproduce bit-identical count arrays") {
    SimulationSpec spec{{1.0, 3.0, 0.5}, {2.0, 8.0}, PriorStrategy::zero(), 100, 777};
    CHECK(simulate_counts(spec) == simulate_counts(spec));
    SimulationSpec other = spec;
    other.seed = 778;
    CHECK(simulate_counts(spec) != simulate_counts(other));
}

TEST_CASE("grid oracle reproduces the conjugate worked cell") {
    const auto m = grid_posterior_oracle(2.0, 4.0, 6.0, 3.0);
    CHECK_FALSE(m.degenerate);
    CHECK(m.mean == Catch::Approx(2.6).margin(1e-6));
    CHECK(m.variance == Catch::Approx(26.0 / 100.0).margin(1e-6));
}

TEST_CASE("grid oracle at zero deficit recovers the raw evidence rate") {
    const auto m = grid_posterior_oracle(2.0, 4.0, 0.0, 0.0);
    CHECK(m.mean == Catch::Approx(2.0).margin(1e-6));
}

TEST_CASE("grid oracle flags the degenerate zero-mass cell") {
    CHECK(grid_posterior_oracle(0.0, 5.0, 0.0, 0.0).degenerate);
    CHECK_THROWS_AS(grid_posterior_oracle(1.0, 1.0, 0.0, 0.0, 100), validation_error);
}

TEST_CASE("conjugate moments agree with the oracle on randomized cells") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> e_dist(0.0, 20.0);
    std::uniform_real_distribution<double> t_dist(0.5, 50.0);
    std::uniform_real_distribution<double> tau_dist(0.0, 50.0);
    std::uniform_real_distribution<double> y_dist(0.0, 20.0);
    int checked = 0;
    while (checked < 50) {
        const double e = e_dist(rng), t = t_dist(rng), tau = tau_dist(rng), y = y_dist(rng);
        const GammaPosterior p = posterior({"C", 0, e, t, tau, y});
        if (p.degenerate()) continue;
        const auto m = grid_posterior_oracle(e, t, tau, y);
        CHECK(std::fabs(p.mean() - m.mean) / m.mean <= 1e-6);
        CHECK(std::fabs(p.variance() - m.variance) / m.variance <= 1e-6);
        ++checked;
    }
}

TEST_CASE("coverage at an extreme level is near one") {
    SimulationSpec spec{{2.0}, {5.0, 10.0}, PriorStrategy::fixed(2.0), 500, 9};
    for (const auto& cell : coverage_experiment(spec, 0.999))
        CHECK(cell.coverage >= 0.99);
}

TEST_CASE("shrinkage: high-deficit contexts sit closer to the prior than their evidence") {
    const double y = 2.0;
    SimulationSpec spec{{2.0}, {50.0, 2.0}, PriorStrategy::fixed(y), 2000, 5};
    const auto counts = simulate_counts(spec);
    const double max_t = 50.0;
    double evid_dev = 0.0, post_dev = 0.0;
    for (const auto& per_context : counts) {
        const double t = spec.exposures[1];
        const double e = static_cast<double>(per_context[1][0]) / t;
        const double mean = posterior_mean(posterior({"C", 0, e, t, max_t - t, y}));
        evid_dev += std::fabs(e - y);
        post_dev += std::fabs(mean - y);
    }
    CHECK(post_dev < evid_dev);
}

TEST_CASE("invalid simulation specs are rejected") {
    CHECK_THROWS_AS(simulate_counts({{1.0}, {1.0}, PriorStrategy::zero(), 0, 1}),
                    validation_error);
    CHECK_THROWS_AS(simulate_counts({{}, {1.0}, PriorStrategy::zero(), 1, 1}), validation_error);
    CHECK_THROWS_AS(simulate_counts({{1.0}, {0.0}, PriorStrategy::zero(), 1, 1}),
                    validation_error);
    CHECK_THROWS_AS(simulate_counts({{-1.0}, {1.0}, PriorStrategy::zero(), 1, 1}),
                    validation_error);
    SimulationSpec spec{{1.0}, {1.0}, PriorStrategy::zero(), 1, 1};
    CHECK_THROWS_AS(coverage_experiment(spec, 1.5), validation_error);
}
