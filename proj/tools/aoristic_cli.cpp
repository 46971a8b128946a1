// Command-line front end for aoristic normalization: weights date-ranged find
// counts onto a time grid, then shrinks per-context rates toward an elicited
// prior in proportion to each context's fieldwork deficit.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aoristic/chronology.hpp"
#include "aoristic/csv.hpp"
#include "aoristic/errors.hpp"
#include "aoristic/pipeline.hpp"
#include "aoristic/plot.hpp"
#include "aoristic/simulation.hpp"

namespace {

using aoristic::AnalysisConfig;
using aoristic::OutputFormat;
using aoristic::PriorKind;
using aoristic::PriorStrategy;

struct CliOptions {
    std::string config_path;
    std::string finds_path;
    std::string contexts_path;
    std::string output_path = "-";
    std::string plot_dir = ".";
    AnalysisConfig config;
    std::string prior_name;
    std::vector<double> fixed_prior;
};

PriorKind parse_prior_name(const std::string& name) {
    if (name == "zero") return PriorKind::Zero;
    if (name == "regional-mean") return PriorKind::RegionalMean;
    if (name == "max-expected") return PriorKind::MaxExpected;
    if (name == "fixed") return PriorKind::Fixed;
    throw aoristic::validation_error("unknown prior strategy '" + name + "'");
}

OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw aoristic::validation_error("unknown output format '" + name + "'");
}

// JSON config file carries the AnalysisConfig fields; CLI flags override.
void load_config_file(const std::string& path, CliOptions& opt) {
    std::ifstream in(path);
    if (!in)
        throw aoristic::io_error("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw aoristic::validation_error("config file '" + path + "': " + e.what());
    }
    if (j.contains("grid_start")) opt.config.grid_start = j["grid_start"].get<std::int64_t>();
    if (j.contains("grid_end")) opt.config.grid_end = j["grid_end"].get<std::int64_t>();
    if (j.contains("interval_width"))
        opt.config.interval_width = j["interval_width"].get<std::int64_t>();
    if (j.contains("prior")) opt.config.prior.kind = parse_prior_name(j["prior"].get<std::string>());
    if (j.contains("fixed_prior")) {
        if (j["fixed_prior"].is_array())
            opt.config.prior.fixed_values = j["fixed_prior"].get<std::vector<double>>();
        else
            opt.config.prior.fixed_values = {j["fixed_prior"].get<double>()};
    }
    if (j.contains("credible_level")) opt.config.credible_level = j["credible_level"].get<double>();
    if (j.contains("baseline_override"))
        opt.config.baseline_override = j["baseline_override"].get<double>();
    if (j.contains("output_format"))
        opt.config.output_format = parse_format(j["output_format"].get<std::string>());
    if (j.contains("emit_plots")) opt.config.emit_plots = j["emit_plots"].get<bool>();
}

void write_text(const std::string& destination, const std::string& body) {
    if (destination == "-") {
        std::cout << body;
        return;
    }
    std::ofstream out(destination, std::ios::binary);
    if (!out)
        throw aoristic::io_error("cannot open '" + destination + "' for writing");
    out << body;
    if (!out)
        throw aoristic::io_error("failed writing to '" + destination + "'");
}

void add_grid_flags(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--config", opt.config_path, "JSON config file; flags override its values");
    cmd->add_option("--grid-start", opt.config.grid_start, "first year of the study window");
    cmd->add_option("--grid-end", opt.config.grid_end, "year after the study window");
    cmd->add_option("--interval-width", opt.config.interval_width, "interval width in years");
}

void add_analysis_flags(CLI::App* cmd, CliOptions& opt) {
    add_grid_flags(cmd, opt);
    cmd->add_option("--prior", opt.prior_name,
                    "prior strategy: zero|regional-mean|max-expected|fixed");
    cmd->add_option("--fixed-prior", opt.fixed_prior,
                    "fixed prior rate(s); one value or one per interval")
        ->delimiter(',');
    cmd->add_option("--level", opt.config.credible_level, "credible level in (0,1)");
    cmd->add_option("--baseline", [&opt](const std::vector<std::string>& vals) {
        opt.config.baseline_override = std::stod(vals[0]);
        return true;
    }, "baseline effort override (>= the set's maximum)");
    cmd->add_option_function<std::string>(
        "--format", [&opt](const std::string& v) { opt.config.output_format = parse_format(v); },
        "output format: csv|json");
    cmd->add_flag("--plots", opt.config.emit_plots, "also write one SVG per context");
    cmd->add_option("--plot-dir", opt.plot_dir, "directory for SVG plots");
    cmd->add_option("-o,--output", opt.output_path, "report destination ('-' for stdout)");
}

void finalize_options(CliOptions& opt) {
    if (!opt.config_path.empty()) {
        // re-apply flags on top of file values: flags were parsed directly
        // into opt, so only fill fields the flags did not touch
        CliOptions from_file;
        from_file.config = opt.config;
        load_config_file(opt.config_path, from_file);
        // flag-set fields win; CLI11 already stored them in opt.config, so
        // merge by taking file values only where the flag kept its default
        AnalysisConfig merged = from_file.config;
        AnalysisConfig defaults;
        if (opt.config.grid_start != defaults.grid_start) merged.grid_start = opt.config.grid_start;
        if (opt.config.grid_end != defaults.grid_end) merged.grid_end = opt.config.grid_end;
        if (opt.config.interval_width != defaults.interval_width)
            merged.interval_width = opt.config.interval_width;
        if (opt.config.credible_level != defaults.credible_level)
            merged.credible_level = opt.config.credible_level;
        if (opt.config.baseline_override) merged.baseline_override = opt.config.baseline_override;
        if (opt.config.output_format != defaults.output_format)
            merged.output_format = opt.config.output_format;
        if (opt.config.emit_plots) merged.emit_plots = true;
        opt.config = merged;
    }
    if (!opt.prior_name.empty()) opt.config.prior.kind = parse_prior_name(opt.prior_name);
    if (!opt.fixed_prior.empty()) opt.config.prior.fixed_values = opt.fixed_prior;
}

int run_aoristic(CliOptions& opt) {
    finalize_options(opt);
    const aoristic::TimeGrid grid = aoristic::build_grid(
        opt.config.grid_start, opt.config.grid_end, opt.config.interval_width);
    const auto finds = aoristic::load_finds(opt.finds_path);
    std::vector<std::string> declared;
    if (!opt.contexts_path.empty())
        for (const auto& c : aoristic::load_contexts(opt.contexts_path))
            declared.push_back(c.context_id);
    const auto series = aoristic::expected_values(finds, grid, declared);

    std::string body;
    if (opt.config.output_format == OutputFormat::Csv) {
        body = "context_id,interval_index,interval_label,expected,clipped_count\n";
        for (const auto& [id, s] : series)
            for (std::size_t j = 0; j < s.expected.size(); ++j) {
                body += aoristic::detail::csv_quote(id) + ',' + std::to_string(j) + ',' +
                        grid.interval_label(static_cast<std::int64_t>(j)) + ',' +
                        aoristic::detail::format_real(s.expected[j]) + ',' +
                        aoristic::detail::format_real(s.clipped_count) + '\n';
            }
    } else {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& [id, s] : series) {
            arr.push_back(nlohmann::ordered_json{{"context_id", id},
                                                 {"expected", s.expected},
                                                 {"clipped_count", s.clipped_count}});
        }
        body = arr.dump(2) + "\n";
    }
    write_text(opt.output_path, body);
    return 0;
}

std::vector<aoristic::ResultRow> run_pipeline(CliOptions& opt) {
    finalize_options(opt);
    const auto finds = aoristic::load_finds(opt.finds_path);
    const auto contexts = aoristic::load_contexts(opt.contexts_path);
    return aoristic::run_analysis(opt.config, finds, contexts);
}

int run_normalize(CliOptions& opt) {
    const auto rows = run_pipeline(opt);
    const std::string body = opt.config.output_format == OutputFormat::Csv
                                 ? aoristic::render_report_csv(rows)
                                 : aoristic::render_report_json(rows);
    write_text(opt.output_path, body);
    if (opt.config.emit_plots) aoristic::emit_plot(rows, opt.plot_dir);
    return 0;
}

int run_compare(CliOptions& opt) {
    const auto rows = run_pipeline(opt);
    const std::string body = opt.config.output_format == OutputFormat::Csv
                                 ? aoristic::render_report_csv(rows)
                                 : aoristic::render_report_json(rows);
    write_text(opt.output_path, body);

    // per-interval ranking by posterior mean, highest first
    std::map<std::int64_t, std::vector<const aoristic::ResultRow*>> by_interval;
    for (const auto& r : rows) by_interval[r.interval_index].push_back(&r);
    std::ostringstream table;
    table << "interval_label,rank,context_id,posterior_mean\n";
    for (auto& [j, cell_rows] : by_interval) {
        std::stable_sort(cell_rows.begin(), cell_rows.end(),
                         [](const auto* a, const auto* b) {
                             if (a->posterior_mean != b->posterior_mean)
                                 return a->posterior_mean > b->posterior_mean;
                             return a->context_id < b->context_id;
                         });
        int rank = 1;
        for (const auto* r : cell_rows)
            table << r->interval_label << ',' << rank++ << ','
                  << aoristic::detail::csv_quote(r->context_id) << ','
                  << aoristic::detail::format_real(r->posterior_mean) << '\n';
    }
    std::cerr << table.str();
    if (opt.config.emit_plots) aoristic::emit_plot(rows, opt.plot_dir);
    return 0;
}

int run_simulate(CliOptions& opt, aoristic::SimulationSpec& spec, double level) {
    finalize_options(opt);
    if (!opt.prior_name.empty()) spec.prior_strategy.kind = parse_prior_name(opt.prior_name);
    if (!opt.fixed_prior.empty()) spec.prior_strategy.fixed_values = opt.fixed_prior;
    if (const char* env_seed = std::getenv("AORISTIC_SEED"))
        spec.seed = std::strtoull(env_seed, nullptr, 10);
    spec.validate();

    const auto coverage = aoristic::coverage_experiment(spec, level);

    std::string body;
    if (opt.config.output_format == OutputFormat::Csv) {
        body = "context_index,interval_index,true_rate,exposure,coverage\n";
        for (const auto& c : coverage)
            body += std::to_string(c.context_index) + ',' + std::to_string(c.interval_index) +
                    ',' + aoristic::detail::format_real(spec.true_rates[c.interval_index]) +
                    ',' + aoristic::detail::format_real(spec.exposures[c.context_index]) +
                    ',' + aoristic::detail::format_real(c.coverage) + '\n';
    } else {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& c : coverage)
            arr.push_back(nlohmann::ordered_json{
                {"context_index", c.context_index},
                {"interval_index", c.interval_index},
                {"true_rate", spec.true_rates[c.interval_index]},
                {"exposure", spec.exposures[c.context_index]},
                {"coverage", c.coverage}});
        body = arr.dump(2) + "\n";
    }
    write_text(opt.output_path, body);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Effort-normalized rate estimation for date-ranged find counts"};
    app.require_subcommand(1);

    CliOptions opt;
    aoristic::SimulationSpec sim_spec;
    double sim_level = 0.9;

    CLI::App* aoristic_cmd =
        app.add_subcommand("aoristic", "emit per-context aoristic expected-value series");
    aoristic_cmd->add_option("--finds", opt.finds_path, "finds CSV")->required();
    aoristic_cmd->add_option("--contexts", opt.contexts_path,
                             "contexts CSV (declares contexts with no finds)");
    add_grid_flags(aoristic_cmd, opt);
    aoristic_cmd->add_option_function<std::string>(
        "--format", [&opt](const std::string& v) { opt.config.output_format = parse_format(v); },
        "output format: csv|json");
    aoristic_cmd->add_option("-o,--output", opt.output_path, "destination ('-' for stdout)");

    CLI::App* normalize_cmd = app.add_subcommand("normalize", "run the full normalization pipeline");
    normalize_cmd->add_option("--finds", opt.finds_path, "finds CSV")->required();
    normalize_cmd->add_option("--contexts", opt.contexts_path, "contexts CSV")->required();
    add_analysis_flags(normalize_cmd, opt);

    CLI::App* compare_cmd =
        app.add_subcommand("compare", "normalize plus a per-interval context ranking (to stderr)");
    compare_cmd->add_option("--finds", opt.finds_path, "finds CSV")->required();
    compare_cmd->add_option("--contexts", opt.contexts_path, "contexts CSV")->required();
    add_analysis_flags(compare_cmd, opt);

    CLI::App* simulate_cmd =
        app.add_subcommand("simulate", "Monte Carlo coverage experiment with known ground truth");
    simulate_cmd->add_option("--rates", sim_spec.true_rates, "true per-interval rates")
        ->delimiter(',')
        ->required();
    simulate_cmd->add_option("--exposures", sim_spec.exposures, "per-context exposures")
        ->delimiter(',')
        ->required();
    simulate_cmd->add_option("--replicates", sim_spec.replicates, "number of replicates");
    simulate_cmd->add_option("--seed", sim_spec.seed,
                             "RNG seed (AORISTIC_SEED env var overrides)");
    simulate_cmd->add_option("--level", sim_level, "credible level for coverage");
    simulate_cmd->add_option("--prior", opt.prior_name,
                             "prior strategy: zero|regional-mean|max-expected|fixed");
    simulate_cmd->add_option("--fixed-prior", opt.fixed_prior, "fixed prior rate(s)")
        ->delimiter(',');
    simulate_cmd->add_option_function<std::string>(
        "--format", [&opt](const std::string& v) { opt.config.output_format = parse_format(v); },
        "output format: csv|json");
    simulate_cmd->add_option("-o,--output", opt.output_path, "destination ('-' for stdout)");

    try {
        app.parse(argc, argv);
        if (aoristic_cmd->parsed()) return run_aoristic(opt);
        if (normalize_cmd->parsed()) return run_normalize(opt);
        if (compare_cmd->parsed()) return run_compare(opt);
        if (simulate_cmd->parsed()) return run_simulate(opt, sim_spec, sim_level);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const aoristic::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const aoristic::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
