#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "aoristic/chronology.hpp"

using namespace aoristic;

namespace {

// Independent year-by-year oracle: distribute count/duration per calendar
// year and bin each year into its grid interval.
std::vector<double> brute_force_series(const std::vector<FindRecord>& finds,
                                       const TimeGrid& grid) {
    std::vector<double> out(static_cast<std::size_t>(grid.interval_count), 0.0);
    for (const auto& f : finds) {
        const double per_year = f.count / static_cast<double>(f.use_end - f.use_start + 1);
        for (std::int64_t y = f.use_start; y <= f.use_end; ++y) {
            if (y < grid.start_year || y >= grid.end_year()) continue;
            const std::int64_t j = (y - grid.start_year) / grid.interval_width;
            out[static_cast<std::size_t>(j)] += per_year;
        }
    }
    return out;
}

} // namespace

TEST_CASE("build_grid splits the span into equal half-open intervals") {
    const TimeGrid g = build_grid(1, 101, 25);
    CHECK(g.interval_count == 4);
    CHECK(g.interval_begin(0) == 1);
    CHECK(g.interval_end(0) == 26);
    CHECK(g.interval_begin(3) == 76);
    CHECK(g.interval_end(3) == 101);
    CHECK(g.interval_label(0) == "1..25");
    CHECK(g.interval_label(3) == "76..100");

    CHECK(build_grid(0, 100, 100).interval_count == 1);
}

TEST_CASE("build_grid rejects bad spans") {
    CHECK_THROWS_MATCHES(build_grid(0, 100, 30), validation_error,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("remainder 10")));
    CHECK_THROWS_AS(build_grid(0, 100, 0), validation_error);
    CHECK_THROWS_AS(build_grid(0, 100, -5), validation_error);
    CHECK_THROWS_AS(build_grid(100, 100, 10), validation_error);
    CHECK_THROWS_AS(build_grid(100, 50, 10), validation_error);
}

TEST_CASE("first-century find spreads 0.25 over four quarter-century intervals") {
    const TimeGrid g = build_grid(1, 101, 25);
    const auto w = aoristic_weights({"F1", "C", 1.0, 1, 100}, g);
    REQUIRE(w.weights.size() == 4);
    for (double v : w.weights) CHECK(v == 0.25);
    CHECK(w.clipped == 0.0);
}

TEST_CASE("find inside one interval gets weight 1 there") {
    const TimeGrid g = build_grid(1, 101, 25);
    const auto w = aoristic_weights({"F1", "C", 1.0, 30, 45}, g);
    CHECK(w.weights == std::vector<double>{0.0, 1.0, 0.0, 0.0});
}

TEST_CASE("half-span find splits across two intervals") {
    const TimeGrid g = build_grid(1, 101, 25);
    const auto w = aoristic_weights({"F1", "C", 1.0, 1, 50}, g);
    CHECK(w.weights == std::vector<double>{0.5, 0.5, 0.0, 0.0});
}

TEST_CASE("instantaneous date lands wholly in its interval") {
    const TimeGrid g = build_grid(1, 101, 25);
    const auto w = aoristic_weights({"F1", "C", 1.0, 77, 77}, g);
    CHECK(w.weights == std::vector<double>{0.0, 0.0, 0.0, 1.0});
}

TEST_CASE("mass outside the grid is clipped, never renormalized") {
    const TimeGrid g = build_grid(1, 101, 25);
    const auto w = aoristic_weights({"F1", "C", 1.0, -49, 50}, g);
    // 100-year span, 50 years before the grid
    CHECK(w.clipped == Catch::Approx(0.5).margin(1e-15));
    double sum = 0.0;
    for (double v : w.weights) sum += v;
    CHECK(sum == Catch::Approx(0.5).margin(1e-15));
}

TEST_CASE("find entirely outside the grid is an error naming the find") {
    const TimeGrid g = build_grid(1, 101, 25);
    CHECK_THROWS_MATCHES(aoristic_weights({"F9", "C", 1.0, 200, 300}, g), validation_error,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("F9")));
    CHECK_THROWS_AS(aoristic_weights({"F9", "C", 1.0, -100, -50}, g), validation_error);
}

TEST_CASE("invalid find records are rejected") {
    const TimeGrid g = build_grid(1, 101, 25);
    CHECK_THROWS_AS(aoristic_weights({"F1", "C", -1.0, 1, 10}, g), validation_error);
    CHECK_THROWS_AS(aoristic_weights({"F1", "C", 1.0, 10, 1}, g), validation_error);
}

TEST_CASE("expected values reproduce the worked example") {
    const TimeGrid g = build_grid(1, 101, 25);
    const std::vector<FindRecord> finds{{"F1", "C", 4.0, 1, 100}};
    const auto series = expected_values(finds, g);
    REQUIRE(series.size() == 1);
    CHECK(series.at("C").expected == std::vector<double>{1.0, 1.0, 1.0, 1.0});
}

TEST_CASE("expected values match the brute-force enumeration oracle") {
    const TimeGrid g = build_grid(1, 101, 25);
    const std::vector<FindRecord> finds{{"F1", "C", 2.0, 1, 50}, {"F2", "C", 1.0, 51, 100}};
    const auto series = expected_values(finds, g);
    const auto oracle = brute_force_series(finds, g);
    const std::vector<double> frozen{1.0, 1.0, 0.5, 0.5};
    for (std::size_t j = 0; j < 4; ++j) {
        REQUIRE(oracle[j] == Catch::Approx(frozen[j]).margin(1e-12));
        CHECK(series.at("C").expected[j] == Catch::Approx(oracle[j]).margin(1e-12));
    }
}

TEST_CASE("declared context with no finds gets a zero series") {
    const TimeGrid g = build_grid(1, 101, 25);
    const std::vector<std::string> declared{"Empty"};
    const auto series = expected_values({}, g, declared);
    REQUIRE(series.size() == 1);
    CHECK(series.at("Empty").expected == std::vector<double>{0.0, 0.0, 0.0, 0.0});
}

TEST_CASE("empty input yields empty output") {
    const TimeGrid g = build_grid(1, 101, 25);
    CHECK(expected_values({}, g).empty());
}

TEST_CASE("randomized finds: normalization, conservation, refinement, permutation") {
    std::mt19937_64 rng(20260824);
    const TimeGrid coarse = build_grid(-200, 400, 50);
    const TimeGrid fine = build_grid(-200, 400, 25);

    std::uniform_int_distribution<std::int64_t> start_dist(-300, 450);
    std::uniform_int_distribution<std::int64_t> len_dist(0, 250);
    std::uniform_real_distribution<double> count_dist(0.0, 10.0);

    std::vector<FindRecord> finds;
    double total_count = 0.0;
    for (int k = 0; k < 200; ++k) {
        FindRecord f;
        f.find_id = "F" + std::to_string(k);
        f.context_id = "C" + std::to_string(k % 3);
        f.use_start = start_dist(rng);
        f.use_end = f.use_start + len_dist(rng);
        f.count = count_dist(rng);
        if (f.use_end + 1 <= coarse.start_year || f.use_start >= coarse.end_year()) {
            --k;
            continue;
        }
        total_count += f.count;
        finds.push_back(f);
    }

    SECTION("weights of in-grid finds sum to one") {
        for (const auto& f : finds) {
            if (f.use_start < coarse.start_year || f.use_end >= coarse.end_year()) continue;
            const auto w = aoristic_weights(f, coarse);
            double sum = 0.0;
            for (double v : w.weights) sum += v;
            CHECK(sum == Catch::Approx(1.0).margin(1e-12));
            CHECK(w.clipped == Catch::Approx(0.0).margin(1e-12));
            for (double v : w.weights) {
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
            }
        }
    }

    SECTION("mass conservation including clipped mass") {
        const auto series = expected_values(finds, coarse);
        double inside = 0.0, clipped = 0.0;
        for (const auto& [id, s] : series) {
            inside += s.total();
            clipped += s.clipped_count;
        }
        CHECK(inside + clipped == Catch::Approx(total_count).epsilon(1e-9));
    }

    SECTION("halved intervals re-aggregate to the coarse series") {
        const auto coarse_series = expected_values(finds, coarse);
        const auto fine_series = expected_values(finds, fine);
        for (const auto& [id, cs] : coarse_series) {
            const auto& fs = fine_series.at(id);
            for (std::size_t j = 0; j < cs.expected.size(); ++j)
                CHECK(fs.expected[2 * j] + fs.expected[2 * j + 1] ==
                      Catch::Approx(cs.expected[j]).margin(1e-9));
        }
    }

    SECTION("reordering the input finds leaves the series unchanged") {
        const auto forward = expected_values(finds, coarse);
        auto shuffled = finds;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const auto backward = expected_values(shuffled, coarse);
        for (const auto& [id, s] : forward) {
            const auto& other = backward.at(id);
            for (std::size_t j = 0; j < s.expected.size(); ++j)
                CHECK(other.expected[j] == Catch::Approx(s.expected[j]).margin(1e-12));
        }
    }
}

TEST_CASE("aligned ranges reduce to exact equal weights") {
    const TimeGrid g = build_grid(0, 500, 50);
    // spans covering exactly 1..10 whole intervals
    for (int covered = 1; covered <= 10; ++covered) {
        FindRecord f{"F", "C", 1.0, 0, static_cast<std::int64_t>(covered) * 50 - 1};
        const auto w = aoristic_weights(f, g);
        for (int j = 0; j < covered; ++j)
            CHECK(w.weights[static_cast<std::size_t>(j)] == 1.0 / covered);
        for (std::size_t j = static_cast<std::size_t>(covered); j < w.weights.size(); ++j)
            CHECK(w.weights[j] == 0.0);
    }
}
