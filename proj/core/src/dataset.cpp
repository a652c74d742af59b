#include "casecost/dataset.hpp"

#include <fmt/format.h>

#include <array>
#include <stdexcept>
#include <unordered_set>

#include "casecost/csv.hpp"

namespace casecost {

namespace {

constexpr const char* kCasesHeader[] = {"case_id", "cmg",       "pac_riw", "riw",
                                        "los_total", "los_acute", "los_alc", "sc_hours"};
constexpr const char* kParamsHeader[] = {"cpwc",           "cpd_total",      "cpd_direct",
                                         "cpd_overhead",   "acute_expenses", "total_patient_days"};
constexpr const char* kBenchmarkHeader[] = {"cmg", "case_count", "total", "average", "stdev", "min", "max"};

/// Maps required column names to indices; unknown columns produce warnings.
template <std::size_t N>
std::array<std::size_t, N> column_map(const csv::Table& table, const char* const (&names)[N],
                                      std::string_view source, std::vector<Violation>* warnings) {
    std::array<std::size_t, N> index{};
    std::vector<bool> known(table.header.size(), false);
    for (std::size_t i = 0; i < N; ++i) {
        bool found = false;
        for (std::size_t j = 0; j < table.header.size(); ++j) {
            if (table.header[j] == names[i]) {
                index[i] = j;
                known[j] = true;
                found = true;
                break;
            }
        }
        if (!found) {
            throw std::runtime_error(fmt::format("{}: missing required column '{}'", source, names[i]));
        }
    }
    if (warnings != nullptr) {
        for (std::size_t j = 0; j < table.header.size(); ++j) {
            if (!known[j]) {
                warnings->push_back(
                    {Severity::Warning, fmt::format("{}: ignoring unknown column '{}'", source, table.header[j])});
            }
        }
    }
    return index;
}

void check_width(const csv::Table& table, std::size_t row, std::string_view source) {
    if (table.rows[row].size() != table.header.size()) {
        throw std::runtime_error(fmt::format("{}: row {}: expected {} columns, got {}", source, row + 2,
                                             table.header.size(), table.rows[row].size()));
    }
}

double require_double(const std::string& field, std::string_view source, std::size_t row, std::string_view column) {
    auto v = csv::parse_double(field);
    if (!v) {
        throw std::runtime_error(
            fmt::format("{}: row {}: column '{}': not a number: '{}'", source, row + 2, column, field));
    }
    return *v;
}

std::int64_t require_int(const std::string& field, std::string_view source, std::size_t row,
                         std::string_view column) {
    auto v = csv::parse_int(field);
    if (!v) {
        throw std::runtime_error(
            fmt::format("{}: row {}: column '{}': not an integer: '{}'", source, row + 2, column, field));
    }
    return *v;
}

std::vector<CaseRecord> read_cases(const std::filesystem::path& path, std::vector<Violation>* warnings) {
    const auto table = csv::read_file(path);
    const auto source = path.filename().string();
    const auto col = column_map(table, kCasesHeader, source, warnings);
    std::vector<CaseRecord> cases;
    cases.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        check_width(table, r, source);
        const auto& row = table.rows[r];
        CaseRecord rec;
        rec.case_id = row[col[0]];
        rec.cmg = row[col[1]];
        rec.pac_riw = require_double(row[col[2]], source, r, "pac_riw");
        rec.riw = require_double(row[col[3]], source, r, "riw");
        rec.los_total = static_cast<int>(require_int(row[col[4]], source, r, "los_total"));
        rec.los_acute = static_cast<int>(require_int(row[col[5]], source, r, "los_acute"));
        rec.los_alc = static_cast<int>(require_int(row[col[6]], source, r, "los_alc"));
        rec.sc_hours = require_double(row[col[7]], source, r, "sc_hours");
        if (rec.case_id.empty()) {
            throw std::runtime_error(fmt::format("{}: row {}: empty case_id", source, r + 2));
        }
        if (rec.cmg.empty()) {
            throw std::runtime_error(fmt::format("{}: row {}: empty cmg", source, r + 2));
        }
        cases.push_back(std::move(rec));
    }
    return cases;
}

HospitalCostParams read_params(const std::filesystem::path& path, std::vector<Violation>* warnings) {
    const auto table = csv::read_file(path);
    const auto source = path.filename().string();
    const auto col = column_map(table, kParamsHeader, source, warnings);
    if (table.rows.size() != 1) {
        throw std::runtime_error(fmt::format("{}: expected exactly one data row, got {}", source, table.rows.size()));
    }
    check_width(table, 0, source);
    const auto& row = table.rows[0];
    HospitalCostParams params;
    params.cpwc = require_double(row[col[0]], source, 0, "cpwc");
    params.cpd_total = require_double(row[col[1]], source, 0, "cpd_total");
    auto optional_double = [&](std::size_t c, std::string_view name) -> std::optional<double> {
        if (row[col[c]].empty()) {
            return std::nullopt;
        }
        return require_double(row[col[c]], source, 0, name);
    };
    params.cpd_direct = optional_double(2, "cpd_direct");
    params.cpd_overhead = optional_double(3, "cpd_overhead");
    params.acute_expenses = optional_double(4, "acute_expenses");
    if (!row[col[5]].empty()) {
        params.total_patient_days = require_int(row[col[5]], source, 0, "total_patient_days");
    }
    return params;
}

std::map<std::string, CmgStats> read_benchmark(const std::filesystem::path& path, std::vector<Violation>* warnings) {
    const auto table = csv::read_file(path);
    const auto source = path.filename().string();
    const auto col = column_map(table, kBenchmarkHeader, source, warnings);
    std::map<std::string, CmgStats> benchmark;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        check_width(table, r, source);
        const auto& row = table.rows[r];
        CmgStats stats;
        stats.cmg = row[col[0]];
        stats.case_count = require_int(row[col[1]], source, r, "case_count");
        stats.total = require_double(row[col[2]], source, r, "total");
        stats.average = require_double(row[col[3]], source, r, "average");
        stats.stdev = require_double(row[col[4]], source, r, "stdev");
        stats.min = require_double(row[col[5]], source, r, "min");
        stats.max = require_double(row[col[6]], source, r, "max");
        if (stats.cmg.empty()) {
            throw std::runtime_error(fmt::format("{}: row {}: empty cmg", source, r + 2));
        }
        if (!benchmark.emplace(stats.cmg, stats).second) {
            throw std::runtime_error(fmt::format("{}: row {}: duplicate cmg '{}'", source, r + 2, stats.cmg));
        }
    }
    return benchmark;
}

}  // namespace

Dataset make_dataset(std::vector<CaseRecord> cases, HospitalCostParams params,
                     std::map<std::string, CmgStats> benchmark, std::vector<Violation>* warnings) {
    Dataset ds;
    ds.cases = std::move(cases);
    ds.params = std::move(params);
    ds.benchmark = std::move(benchmark);

    auto raise = [](const Violation& v) { throw std::runtime_error(v.message); };

    for (const auto& v : validate_params(ds.params)) {
        if (v.severity == Severity::Error) {
            raise(v);
        } else if (warnings != nullptr) {
            warnings->push_back(v);
        }
    }

    std::unordered_set<std::string> case_ids;
    case_ids.reserve(ds.cases.size());
    for (std::size_t i = 0; i < ds.cases.size(); ++i) {
        const auto& rec = ds.cases[i];
        if (!case_ids.insert(rec.case_id).second) {
            throw std::runtime_error(fmt::format("duplicate case_id '{}'", rec.case_id));
        }
        for (const auto& v : validate_case(rec)) {
            if (v.severity == Severity::Error) {
                raise(v);
            } else if (warnings != nullptr) {
                warnings->push_back(v);
            }
        }
        ds.groups[rec.cmg].push_back(i);
    }

    for (const auto& [cmg, stats] : ds.benchmark) {
        for (const auto& v : validate_stats(stats)) {
            if (v.severity == Severity::Error) {
                raise(v);
            } else if (warnings != nullptr) {
                warnings->push_back(v);
            }
        }
        auto it = ds.groups.find(cmg);
        if (it == ds.groups.end()) {
            throw std::runtime_error(fmt::format("benchmark lists CMG '{}' absent from the cases table", cmg));
        }
        if (static_cast<std::int64_t>(it->second.size()) != stats.case_count) {
            throw std::runtime_error(
                fmt::format("CMG '{}': benchmark case_count {} does not match {} case records", cmg,
                            stats.case_count, it->second.size()));
        }
    }
    for (const auto& [cmg, indices] : ds.groups) {
        (void)indices;
        if (ds.benchmark.find(cmg) == ds.benchmark.end()) {
            throw std::runtime_error(fmt::format("cases reference CMG '{}' absent from the benchmark table", cmg));
        }
    }
    return ds;
}

Dataset load_dataset(const std::filesystem::path& cases_path, const std::filesystem::path& params_path,
                     const std::filesystem::path& benchmark_path, std::vector<Violation>* warnings) {
    auto cases = read_cases(cases_path, warnings);
    auto params = read_params(params_path, warnings);
    auto benchmark = read_benchmark(benchmark_path, warnings);
    return make_dataset(std::move(cases), std::move(params), std::move(benchmark), warnings);
}

Dataset load_dataset_dir(const std::filesystem::path& dir, std::vector<Violation>* warnings) {
    return load_dataset(dir / "cases.csv", dir / "params.csv", dir / "benchmark.csv", warnings);
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    csv::Table cases;
    cases.header.assign(std::begin(kCasesHeader), std::end(kCasesHeader));
    for (const auto& rec : dataset.cases) {
        cases.rows.push_back({rec.case_id, rec.cmg, format_number(rec.pac_riw), format_number(rec.riw),
                              std::to_string(rec.los_total), std::to_string(rec.los_acute),
                              std::to_string(rec.los_alc), format_number(rec.sc_hours)});
    }
    csv::write_file(dir / "cases.csv", cases);

    csv::Table params;
    params.header.assign(std::begin(kParamsHeader), std::end(kParamsHeader));
    const auto& p = dataset.params;
    auto opt_money = [](const std::optional<double>& v) { return v ? format_money(*v) : std::string{}; };
    params.rows.push_back({format_money(p.cpwc), format_money(p.cpd_total), opt_money(p.cpd_direct),
                           opt_money(p.cpd_overhead), opt_money(p.acute_expenses),
                           p.total_patient_days ? std::to_string(*p.total_patient_days) : std::string{}});
    csv::write_file(dir / "params.csv", params);

    csv::Table benchmark;
    benchmark.header.assign(std::begin(kBenchmarkHeader), std::end(kBenchmarkHeader));
    for (const auto& [cmg, s] : dataset.benchmark) {
        benchmark.rows.push_back({cmg, std::to_string(s.case_count), format_money(s.total), format_money(s.average),
                                  format_money(s.stdev), format_money(s.min), format_money(s.max)});
    }
    csv::write_file(dir / "benchmark.csv", benchmark);
}

}  // namespace casecost
