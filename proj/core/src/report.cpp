#include "casecost/report.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "casecost/csv.hpp"

namespace casecost {

namespace {

using nlohmann::json;

void write_json_file(const std::filesystem::path& path, const json& value) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot write {}", path.string()));
    }
    out << value.dump(2) << '\n';
    if (!out.flush()) {
        throw std::runtime_error(fmt::format("write failed for {}", path.string()));
    }
}

std::string bucket_label(const Bucket& bucket) {
    if (std::isinf(bucket.hi)) {
        return fmt::format("p_{}_plus", format_number(bucket.lo));
    }
    return fmt::format("p_{}_{}", format_number(bucket.lo), format_number(bucket.hi));
}

json bucket_json(const Bucket& bucket) {
    json j;
    j["lo"] = bucket.lo;
    if (std::isinf(bucket.hi)) {
        j["hi"] = nullptr;
    } else {
        j["hi"] = bucket.hi;
    }
    return j;
}

std::string format_pct(double v) { return fmt::format("{:.4f}", v); }

}  // namespace

std::optional<OutputFormat> parse_output_format(std::string_view token) {
    if (token == "csv") {
        return OutputFormat::Csv;
    }
    if (token == "json") {
        return OutputFormat::Json;
    }
    return std::nullopt;
}

void write_estimates(const std::filesystem::path& path, OutputFormat format,
                     const std::vector<CaseEstimate>& estimates, ModelId model) {
    const auto model_name = to_string(model);
    if (format == OutputFormat::Csv) {
        csv::Table table;
        table.header = {"case_id", "cmg", "model", "cce"};
        table.rows.reserve(estimates.size());
        for (const auto& est : estimates) {
            table.rows.push_back({est.case_id, est.cmg, model_name, format_money(est.cce)});
        }
        csv::write_file(path, table);
        return;
    }
    json rows = json::array();
    for (const auto& est : estimates) {
        rows.push_back({{"case_id", est.case_id}, {"cmg", est.cmg}, {"model", model_name},
                        {"cce", round_cents(est.cce)}});
    }
    write_json_file(path, rows);
}

void write_cmg_stats(const std::filesystem::path& path, OutputFormat format,
                     const std::vector<std::pair<ModelId, std::map<std::string, CmgStats>>>& blocks) {
    if (format == OutputFormat::Csv) {
        csv::Table table;
        table.header = {"cmg", "model", "case_count", "total", "average", "stdev", "min", "max"};
        for (const auto& [model, stats] : blocks) {
            const auto model_name = to_string(model);
            for (const auto& [cmg, s] : stats) {
                table.rows.push_back({cmg, model_name, std::to_string(s.case_count), format_money(s.total),
                                      format_money(s.average), format_money(s.stdev), format_money(s.min),
                                      format_money(s.max)});
            }
        }
        csv::write_file(path, table);
        return;
    }
    json rows = json::array();
    for (const auto& [model, stats] : blocks) {
        const auto model_name = to_string(model);
        for (const auto& [cmg, s] : stats) {
            rows.push_back({{"cmg", cmg},
                            {"model", model_name},
                            {"case_count", s.case_count},
                            {"total", round_cents(s.total)},
                            {"average", round_cents(s.average)},
                            {"stdev", round_cents(s.stdev)},
                            {"min", round_cents(s.min)},
                            {"max", round_cents(s.max)}});
        }
    }
    write_json_file(path, rows);
}

void write_performance(const std::filesystem::path& path, OutputFormat format,
                       const std::vector<PerformanceTable>& tables, const ReportOptions& options) {
    if (tables.empty()) {
        throw std::invalid_argument("performance report needs at least one table");
    }
    const auto& buckets = tables.front().buckets;
    for (const auto& table : tables) {
        if (table.buckets.size() != buckets.size()) {
            throw std::invalid_argument("performance tables have mismatched bucket layouts");
        }
    }

    if (format == OutputFormat::Csv) {
        csv::Table out;
        out.header.push_back("measure");
        for (const auto& table : tables) {
            out.header.push_back(to_string(table.model_id));
        }
        auto money_row = [&](std::string label, auto getter) {
            std::vector<std::string> row{std::move(label)};
            for (const auto& table : tables) {
                row.push_back(format_money(getter(table)));
            }
            out.rows.push_back(std::move(row));
        };
        money_row("mean_abs_e_avg", [](const PerformanceTable& t) { return t.mean_abs_e_avg; });
        money_row("mean_abs_e_min", [](const PerformanceTable& t) { return t.mean_abs_e_min; });
        money_row("mean_abs_e_max", [](const PerformanceTable& t) { return t.mean_abs_e_max; });
        if (options.include_stdev_row) {
            money_row("mean_abs_e_stdev", [](const PerformanceTable& t) { return t.mean_abs_e_stdev; });
        }
        for (std::size_t b = 0; b < buckets.size(); ++b) {
            std::vector<std::string> row{bucket_label(buckets[b])};
            for (const auto& table : tables) {
                row.push_back(format_pct(table.p_ab[b]));
            }
            out.rows.push_back(std::move(row));
        }
        csv::write_file(path, out);
        return;
    }

    json j;
    j["buckets"] = json::array();
    for (const auto& bucket : buckets) {
        j["buckets"].push_back(bucket_json(bucket));
    }
    j["models"] = json::array();
    for (const auto& table : tables) {
        json m;
        m["model"] = to_string(table.model_id);
        m["n_groups"] = table.n_groups;
        m["mean_abs_e_avg"] = round_cents(table.mean_abs_e_avg);
        m["mean_abs_e_min"] = round_cents(table.mean_abs_e_min);
        m["mean_abs_e_max"] = round_cents(table.mean_abs_e_max);
        if (options.include_stdev_row) {
            m["mean_abs_e_stdev"] = round_cents(table.mean_abs_e_stdev);
        }
        m["p_ab"] = table.p_ab;
        j["models"].push_back(std::move(m));
    }
    write_json_file(path, j);
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<TracePoint>& trace) {
    csv::Table table;
    table.header = {"k1", "k2", "k3", "large", "very_large", "small"};
    table.rows.reserve(trace.size());
    for (const auto& point : trace) {
        table.rows.push_back({format_number(point.k1), format_number(point.k2), format_number(point.k3),
                              format_number(point.criteria.large_err_pct),
                              format_number(point.criteria.very_large_err_pct),
                              format_number(point.criteria.small_err_pct)});
    }
    csv::write_file(path, table);
}

}  // namespace casecost
