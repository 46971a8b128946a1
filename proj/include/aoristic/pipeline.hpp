#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "aoristic/chronology.hpp"
#include "aoristic/errors.hpp"
#include "aoristic/inference.hpp"
#include "aoristic/intensity.hpp"
#include "aoristic/priors.hpp"

namespace aoristic {

enum class OutputFormat { Csv, Json };

struct AnalysisConfig {
    std::int64_t grid_start = 0;
    std::int64_t grid_end = 0;
    std::int64_t interval_width = 1;
    PriorStrategy prior;
    double credible_level = 0.95;
    std::optional<double> baseline_override;
    OutputFormat output_format = OutputFormat::Csv;
    bool emit_plots = false;

    void validate() const {
        build_grid(grid_start, grid_end, interval_width);
        if (!(credible_level > 0.0 && credible_level < 1.0))
            throw validation_error("credible level must lie in (0, 1)");
        prior.validate();
    }
};

struct ResultRow {
    std::string context_id;
    std::int64_t interval_index = 0;
    std::string interval_label;
    double evidence_rate = 0.0;
    double exposure = 0.0;
    double deficit = 0.0;
    double prior = 0.0;
    double posterior_shape = 0.0;
    double posterior_rate = 0.0;
    double posterior_mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    bool degenerate_flag = false;

    bool operator==(const ResultRow&) const = default;
};

// Full pipeline: aoristic expected values -> intensity deficits -> prior
// elicitation -> conjugate posterior and summaries per (context, interval)
// cell. Rows are ordered by (context_id, interval_index) and reproduce the
// inference-module values exactly; rounding happens only at serialization.
inline std::vector<ResultRow> run_analysis(const AnalysisConfig& config,
                                           std::span<const FindRecord> finds,
                                           std::span<const ContextRecord> contexts) {
    config.validate();
    const TimeGrid grid = build_grid(config.grid_start, config.grid_end, config.interval_width);

    const IntensityProfile intensity = compute_deficits(contexts, config.baseline_override);

    std::string dangling;
    for (const auto& find : finds)
        if (!intensity.contexts.contains(find.context_id))
            dangling += (dangling.empty() ? "" : ", ") + find.find_id + " -> '" +
                        find.context_id + "'";
    if (!dangling.empty())
        throw validation_error("finds reference unknown contexts: " + dangling);

    std::vector<std::string> declared;
    declared.reserve(contexts.size());
    for (const auto& ctx : contexts) declared.push_back(ctx.context_id);
    const auto series_by_context = expected_values(finds, grid, declared);

    std::vector<AoristicSeries> series;
    series.reserve(series_by_context.size());
    for (const auto& [id, s] : series_by_context) series.push_back(s);
    const std::vector<double> prior =
        elicit(config.prior, series, static_cast<std::size_t>(grid.interval_count));

    std::vector<ResultRow> rows;
    rows.reserve(series.size() * static_cast<std::size_t>(grid.interval_count));
    for (const auto& s : series) {
        const ContextIntensity& ci = intensity.at(s.context_id);
        for (std::int64_t j = 0; j < grid.interval_count; ++j) {
            RateCell cell{s.context_id, j, s.expected[static_cast<std::size_t>(j)],
                          ci.effective_duration, ci.deficit, prior[static_cast<std::size_t>(j)]};
            const GammaPosterior post = posterior(cell);
            const CredibleInterval interval = credible_interval(post, config.credible_level);
            ResultRow row;
            row.context_id = s.context_id;
            row.interval_index = j;
            row.interval_label = grid.interval_label(j);
            row.evidence_rate = cell.evidence_rate;
            row.exposure = cell.exposure;
            row.deficit = cell.deficit;
            row.prior = cell.prior_rate;
            row.posterior_shape = post.shape;
            row.posterior_rate = post.rate;
            row.posterior_mean = posterior_mean(post);
            row.ci_low = interval.low;
            row.ci_high = interval.high;
            row.degenerate_flag = interval.degenerate;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

namespace detail {

// 17 significant digits round-trips any double through text exactly.
inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos)
        return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

} // namespace detail

inline const char* result_csv_header() {
    return "context_id,interval_index,interval_label,evidence_rate,exposure,deficit,prior,"
           "posterior_shape,posterior_rate,posterior_mean,ci_low,ci_high,degenerate_flag";
}

inline std::string render_report_csv(std::span<const ResultRow> rows) {
    std::string out = result_csv_header();
    out += '\n';
    for (const auto& r : rows) {
        out += detail::csv_quote(r.context_id);
        out += ',' + std::to_string(r.interval_index);
        out += ',' + detail::csv_quote(r.interval_label);
        out += ',' + detail::format_real(r.evidence_rate);
        out += ',' + detail::format_real(r.exposure);
        out += ',' + detail::format_real(r.deficit);
        out += ',' + detail::format_real(r.prior);
        out += ',' + detail::format_real(r.posterior_shape);
        out += ',' + detail::format_real(r.posterior_rate);
        out += ',' + detail::format_real(r.posterior_mean);
        out += ',' + detail::format_real(r.ci_low);
        out += ',' + detail::format_real(r.ci_high);
        out += ',';
        out += r.degenerate_flag ? "true" : "false";
        out += '\n';
    }
    return out;
}

inline nlohmann::ordered_json row_to_json(const ResultRow& r) {
    return nlohmann::ordered_json{{"context_id", r.context_id},
                                  {"interval_index", r.interval_index},
                                  {"interval_label", r.interval_label},
                                  {"evidence_rate", r.evidence_rate},
                                  {"exposure", r.exposure},
                                  {"deficit", r.deficit},
                                  {"prior", r.prior},
                                  {"posterior_shape", r.posterior_shape},
                                  {"posterior_rate", r.posterior_rate},
                                  {"posterior_mean", r.posterior_mean},
                                  {"ci_low", r.ci_low},
                                  {"ci_high", r.ci_high},
                                  {"degenerate_flag", r.degenerate_flag}};
}

inline std::string render_report_json(std::span<const ResultRow> rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) arr.push_back(row_to_json(r));
    return arr.dump(2) + "\n";
}

inline ResultRow row_from_json(const nlohmann::json& j) {
    ResultRow r;
    r.context_id = j.at("context_id").get<std::string>();
    r.interval_index = j.at("interval_index").get<std::int64_t>();
    r.interval_label = j.at("interval_label").get<std::string>();
    r.evidence_rate = j.at("evidence_rate").get<double>();
    r.exposure = j.at("exposure").get<double>();
    r.deficit = j.at("deficit").get<double>();
    r.prior = j.at("prior").get<double>();
    r.posterior_shape = j.at("posterior_shape").get<double>();
    r.posterior_rate = j.at("posterior_rate").get<double>();
    r.posterior_mean = j.at("posterior_mean").get<double>();
    r.ci_low = j.at("ci_low").get<double>();
    r.ci_high = j.at("ci_high").get<double>();
    r.degenerate_flag = j.at("degenerate_flag").get<bool>();
    return r;
}

inline void emit_report(std::span<const ResultRow> rows, OutputFormat format,
                        const std::string& destination) {
    const std::string body =
        format == OutputFormat::Csv ? render_report_csv(rows) : render_report_json(rows);
    std::ofstream out(destination, std::ios::binary);
    if (!out)
        throw io_error("cannot open '" + destination + "' for writing");
    out << body;
    if (!out)
        throw io_error("failed writing report to '" + destination + "'");
}

} // namespace aoristic
