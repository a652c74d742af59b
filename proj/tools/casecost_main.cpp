#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "casecost/aggregate.hpp"
#include "casecost/dataset.hpp"
#include "casecost/evaluate.hpp"
#include "casecost/models.hpp"
#include "casecost/optimize.hpp"
#include "casecost/report.hpp"
#include "casecost/synthetic.hpp"
#include "casecost/types.hpp"

namespace {

namespace fs = std::filesystem;
using namespace casecost;

struct GlobalOptions {
    std::string format = "csv";
    unsigned threads = 0;
    bool quiet = false;

    OutputFormat output_format() const { return *parse_output_format(format); }
    const char* extension() const { return format == "csv" ? "csv" : "json"; }
};

void print_warnings(const std::vector<Violation>& warnings, const GlobalOptions& global) {
    if (global.quiet) {
        return;
    }
    for (const auto& w : warnings) {
        fmt::print(stderr, "warning: {}\n", w.message);
    }
}

void info(const GlobalOptions& global, std::string_view message) {
    if (!global.quiet) {
        fmt::print("{}\n", message);
    }
}

/// lo:hi:step range, or a single value as a one-point range.
AxisRange parse_axis(const std::string& text, const std::string& flag) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(':', start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string::npos) {
            break;
        }
        start = pos + 1;
    }
    auto value = [&](const std::string& token) {
        try {
            std::size_t used = 0;
            const double v = std::stod(token, &used);
            if (used != token.size()) {
                throw std::invalid_argument(token);
            }
            return v;
        } catch (const std::exception&) {
            throw CLI::ValidationError(flag, fmt::format("'{}' is not a number", token));
        }
    };
    if (parts.size() == 1) {
        const double v = value(parts[0]);
        return AxisRange{v, v, 1.0};
    }
    if (parts.size() == 3) {
        return AxisRange{value(parts[0]), value(parts[1]), value(parts[2])};
    }
    throw CLI::ValidationError(flag, fmt::format("expected VALUE or LO:HI:STEP, got '{}'", text));
}

std::array<double, 3> parse_ratio_triple(const std::string& text, const std::string& flag) {
    std::array<double, 3> out{};
    std::size_t start = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        const auto pos = text.find(',', start);
        if ((pos == std::string::npos) != (i == 2)) {
            throw CLI::ValidationError(flag, fmt::format("expected K1,K2,K3, got '{}'", text));
        }
        const auto token = text.substr(start, pos - start);
        try {
            std::size_t used = 0;
            out[i] = std::stod(token, &used);
            if (used != token.size()) {
                throw std::invalid_argument(token);
            }
        } catch (const std::exception&) {
            throw CLI::ValidationError(flag, fmt::format("'{}' is not a number", token));
        }
        start = pos + 1;
    }
    return out;
}

std::pair<int, int> parse_case_range(const std::string& text, const std::string& flag) {
    const auto pos = text.find(':');
    try {
        if (pos == std::string::npos) {
            const int v = std::stoi(text);
            return {v, v};
        }
        return {std::stoi(text.substr(0, pos)), std::stoi(text.substr(pos + 1))};
    } catch (const std::exception&) {
        throw CLI::ValidationError(flag, fmt::format("expected N or LO:HI, got '{}'", text));
    }
}

std::vector<ModelId> parse_model_list(const std::string& text) {
    std::vector<ModelId> models;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto pos = text.find(',', start);
        const auto token = text.substr(start, pos - start);
        const auto model = parse_model_id(token);
        if (!model || *model == ModelId::Hybrid) {
            throw CLI::ValidationError("--models",
                                       fmt::format("'{}' is not a per-case model (m1..m5); "
                                                   "request the hybrid with --hybrid",
                                                   token));
        }
        models.push_back(*model);
        if (pos == std::string::npos) {
            break;
        }
        start = pos + 1;
    }
    if (models.empty()) {
        throw CLI::ValidationError("--models", "empty model list");
    }
    return models;
}

int cmd_generate(const GlobalOptions& global, const SyntheticSpec& spec, const fs::path& out_dir) {
    const auto data = generate_synthetic(spec);
    fs::create_directories(out_dir);
    write_synthetic(data, out_dir);

    nlohmann::json manifest;
    manifest["command"] = "generate";
    manifest["seed"] = spec.seed;
    manifest["n_cmgs"] = spec.n_cmgs;
    manifest["cases_per_cmg"] = {spec.cases_per_cmg_min, spec.cases_per_cmg_max};
    manifest["cost_process"] = to_string(spec.cost_process);
    manifest["degenerate_pac_fraction"] = spec.degenerate_pac_fraction;
    manifest["degenerate_both_fraction"] = spec.degenerate_both_fraction;
    manifest["stay_cost_ratios"] = {spec.stay_ratio_acute, spec.stay_ratio_alc, spec.stay_ratio_sc};
    manifest["files"] = {"cases.csv", "params.csv", "benchmark.csv", "ground_truth.csv"};
    std::ofstream out(out_dir / "manifest.json", std::ios::binary);
    out << manifest.dump(2) << '\n';

    info(global, fmt::format("generated {} cases in {} CMG groups under {}", data.dataset.cases.size(),
                             data.dataset.benchmark.size(), out_dir.string()));
    return 0;
}

int cmd_estimate(const GlobalOptions& global, ModelId model, const ModelConfig& config, const fs::path& data_dir,
                 fs::path out_path) {
    std::vector<Violation> warnings;
    const auto dataset = load_dataset_dir(data_dir, &warnings);
    auto estimates = estimate(model, dataset, config, &warnings);
    print_warnings(warnings, global);

    if (out_path.empty()) {
        out_path = fmt::format("estimates.{}", global.extension());
    }
    write_estimates(out_path, global.output_format(), estimates, model);

    double estimate_sum = 0.0;
    for (const auto& est : estimates) {
        estimate_sum += est.cce;
    }
    double benchmark_sum = 0.0;
    for (const auto& [cmg, stats] : dataset.benchmark) {
        benchmark_sum += stats.average * static_cast<double>(stats.case_count);
    }
    info(global, fmt::format("{}: {} cases, estimate total {}, benchmark total {} -> {}", to_string(model),
                             estimates.size(), format_money(estimate_sum), format_money(benchmark_sum),
                             out_path.string()));
    return 0;
}

int cmd_report(const GlobalOptions& global, const std::vector<ModelId>& models, bool hybrid,
               const ModelConfig& config, const ReportOptions& report_options, const fs::path& data_dir,
               const fs::path& out_dir) {
    std::vector<Violation> warnings;
    const auto dataset = load_dataset_dir(data_dir, &warnings);

    std::vector<PerformanceTable> tables;
    std::vector<std::pair<ModelId, std::map<std::string, CmgStats>>> stat_blocks;
    std::map<ModelId, std::map<std::string, CmgStats>> cache;

    auto stats_for = [&](ModelId model) -> const std::map<std::string, CmgStats>& {
        auto it = cache.find(model);
        if (it == cache.end()) {
            auto estimates = estimate(model, dataset, config, &warnings);
            it = cache.emplace(model, aggregate(estimates)).first;
        }
        return it->second;
    };

    for (const auto model : models) {
        const auto& stats = stats_for(model);
        const auto errors = compute_errors(stats, dataset.benchmark);
        tables.push_back(performance_table(model, errors, config.buckets));
        stat_blocks.emplace_back(model, stats);
    }
    if (hybrid) {
        auto combined = hybrid_combine(stats_for(ModelId::M3), stats_for(ModelId::M5), &warnings);
        const auto errors = compute_errors(combined, dataset.benchmark);
        tables.push_back(performance_table(ModelId::Hybrid, errors, config.buckets));
        stat_blocks.emplace_back(ModelId::Hybrid, std::move(combined));
    }
    print_warnings(warnings, global);

    fs::create_directories(out_dir);
    const auto performance_path = out_dir / fmt::format("performance.{}", global.extension());
    const auto stats_path = out_dir / fmt::format("cmg_stats.{}", global.extension());
    write_performance(performance_path, global.output_format(), tables, report_options);
    write_cmg_stats(stats_path, global.output_format(), stat_blocks);

    info(global, fmt::format("{} model column(s) over {} CMG groups -> {}, {}", tables.size(),
                             tables.front().n_groups, performance_path.string(), stats_path.string()));
    return 0;
}

int cmd_optimize(const GlobalOptions& global, ModelId model, const GridSpec& grid, const fs::path& data_dir,
                 const fs::path& trace_path) {
    std::vector<Violation> warnings;
    const auto dataset = load_dataset_dir(data_dir, &warnings);
    print_warnings(warnings, global);

    const auto result = grid_search(dataset, grid, model, global.threads, !trace_path.empty());
    if (!trace_path.empty()) {
        write_trace_csv(trace_path, result.trace);
    }

    if (global.output_format() == OutputFormat::Json) {
        nlohmann::json j;
        j["model"] = to_string(model);
        j["k1"] = result.k1;
        j["k2"] = result.k2;
        j["k3"] = result.k3;
        j["large_err_pct"] = result.criteria.large_err_pct;
        j["very_large_err_pct"] = result.criteria.very_large_err_pct;
        j["small_err_pct"] = result.criteria.small_err_pct;
        j["n_groups"] = result.table.n_groups;
        fmt::print("{}\n", j.dump(2));
    } else {
        fmt::print("best k1={} k2={} k3={}\n", format_number(result.k1), format_number(result.k2),
                   format_number(result.k3));
        fmt::print("criteria: large={:.4f}% very_large={:.4f}% small={:.4f}%\n", result.criteria.large_err_pct,
                   result.criteria.very_large_err_pct, result.criteria.small_err_pct);
    }
    if (!trace_path.empty()) {
        info(global, fmt::format("trace with {} points -> {}", result.trace.size(), trace_path.string()));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"casecost - patient-level hospital case cost estimation"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    app.add_option("--format", global.format, "Report format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--threads", global.threads, "Worker threads for the grid search (0 = all cores)")
        ->capture_default_str();
    app.add_flag("--quiet", global.quiet, "Suppress warnings and summary lines");

    // generate
    auto* gen = app.add_subcommand("generate", "Generate a synthetic dataset with known ground truth");
    SyntheticSpec spec;
    std::string cases_range = "20:80";
    std::string process = "mixed";
    std::string stay_ratios;
    fs::path gen_out;
    gen->add_option("--cmgs", spec.n_cmgs, "Number of CMG groups")->check(CLI::PositiveNumber)->capture_default_str();
    gen->add_option("--cases", cases_range, "Cases per CMG, N or LO:HI")->capture_default_str();
    gen->add_option("--process", process, "True-cost process")
        ->check(CLI::IsMember({"riw", "los", "mixed"}))
        ->capture_default_str();
    gen->add_option("--degenerate-pac", spec.degenerate_pac_fraction,
                    "Fraction of CMGs with one shared PAC weight")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    gen->add_option("--degenerate-both", spec.degenerate_both_fraction,
                    "Fraction of CMGs with shared PAC and RIW weights")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    gen->add_option("--stay-ratios", stay_ratios, "True stay-type cost ratios K1,K2,K3 for the los/mixed processes");
    gen->add_option("--seed", spec.seed, "Generator seed")->capture_default_str();
    gen->add_option("-o,--out", gen_out, "Output directory")->required();

    // estimate
    auto* est = app.add_subcommand("estimate", "Estimate per-case costs with one model");
    std::string est_model = "m1";
    ModelConfig est_config;
    fs::path est_data;
    fs::path est_out;
    est->add_option("--model", est_model, "Model: m1..m5")
        ->check(CLI::IsMember({"m1", "m2", "m3", "m4", "m5", "hybrid"}))
        ->required();
    est->add_option("--k1", est_config.k1, "Acute-care multiplier (m5)")->capture_default_str();
    est->add_option("--k2", est_config.k2, "Alternate-care multiplier (m5)")->capture_default_str();
    est->add_option("--k3", est_config.k3, "Special-care multiplier (m5)")->capture_default_str();
    est->add_option("-o,--out", est_out, "Output file (default estimates.csv/json)");
    est->add_option("data_dir", est_data, "Directory with cases.csv, params.csv, benchmark.csv")
        ->required()
        ->check(CLI::ExistingDirectory);

    // report
    auto* rep = app.add_subcommand("report", "Run models and emit the performance comparison");
    std::string rep_models = "m1,m2,m3,m4,m5";
    bool rep_hybrid = false;
    ReportOptions report_options;
    ModelConfig rep_config;
    fs::path rep_data;
    fs::path rep_out = ".";
    rep->add_option("--models", rep_models, "Comma-separated models (m1..m5)")->capture_default_str();
    rep->add_flag("--hybrid", rep_hybrid, "Add the hybrid column (m3 totals, m5 min/max)");
    rep->add_flag("--include-stdev", report_options.include_stdev_row,
                  "Add the mean absolute stdev-error row (extension)");
    rep->add_option("--k1", rep_config.k1, "Acute-care multiplier (m5)")->capture_default_str();
    rep->add_option("--k2", rep_config.k2, "Alternate-care multiplier (m5)")->capture_default_str();
    rep->add_option("--k3", rep_config.k3, "Special-care multiplier (m5)")->capture_default_str();
    rep->add_option("-o,--out", rep_out, "Output directory")->capture_default_str();
    rep->add_option("data_dir", rep_data, "Directory with cases.csv, params.csv, benchmark.csv")
        ->required()
        ->check(CLI::ExistingDirectory);

    // optimize
    auto* opt = app.add_subcommand("optimize", "Grid-search the stay-type coefficients");
    std::string opt_model = "m5";
    std::string k1_range = "1.3";
    std::string k2_range = "0.5";
    std::string k3_range = "2.85";
    std::size_t max_points = 1'000'000;
    fs::path opt_data;
    fs::path opt_trace;
    opt->add_option("--model", opt_model, "Model to optimize")
        ->check(CLI::IsMember({"m5", "hybrid"}))
        ->capture_default_str();
    opt->add_option("--k1", k1_range, "k1 grid, VALUE or LO:HI:STEP")->capture_default_str();
    opt->add_option("--k2", k2_range, "k2 grid, VALUE or LO:HI:STEP")->capture_default_str();
    opt->add_option("--k3", k3_range, "k3 grid, VALUE or LO:HI:STEP")->capture_default_str();
    opt->add_option("--max-points", max_points, "Grid size cap")->capture_default_str();
    opt->add_option("--trace", opt_trace, "Write the per-point trace to this CSV file");
    opt->add_option("data_dir", opt_data, "Directory with cases.csv, params.csv, benchmark.csv")
        ->required()
        ->check(CLI::ExistingDirectory);

    try {
        app.parse(argc, argv);

        if (gen->parsed()) {
            const auto [lo, hi] = parse_case_range(cases_range, "--cases");
            spec.cases_per_cmg_min = lo;
            spec.cases_per_cmg_max = hi;
            spec.cost_process = *parse_cost_process(process);
            if (!stay_ratios.empty()) {
                const auto ratios = parse_ratio_triple(stay_ratios, "--stay-ratios");
                spec.stay_ratio_acute = ratios[0];
                spec.stay_ratio_alc = ratios[1];
                spec.stay_ratio_sc = ratios[2];
            }
            return cmd_generate(global, spec, gen_out);
        }
        if (est->parsed()) {
            const auto model = *parse_model_id(est_model);
            if (model == ModelId::Hybrid) {
                throw CLI::ValidationError("--model",
                                           "hybrid combines per-CMG statistics, not per-case estimates; "
                                           "run `report --hybrid` instead");
            }
            return cmd_estimate(global, model, est_config, est_data, est_out);
        }
        if (rep->parsed()) {
            return cmd_report(global, parse_model_list(rep_models), rep_hybrid, rep_config, report_options, rep_data,
                              rep_out);
        }
        if (opt->parsed()) {
            GridSpec grid;
            grid.k1 = parse_axis(k1_range, "--k1");
            grid.k2 = parse_axis(k2_range, "--k2");
            grid.k3 = parse_axis(k3_range, "--k3");
            grid.max_points = max_points;
            return cmd_optimize(global, *parse_model_id(opt_model), grid, opt_data, opt_trace);
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
}
