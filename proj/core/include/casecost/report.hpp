#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "casecost/optimize.hpp"
#include "casecost/types.hpp"

namespace casecost {

enum class OutputFormat { Csv, Json };

std::optional<OutputFormat> parse_output_format(std::string_view token);

struct ReportOptions {
    /// Adds the mean absolute stdev-error row, an extension beyond the
    /// standard three dollar rows.
    bool include_stdev_row = false;
};

/// estimates.{csv,json}: case_id, cmg, model, cce (cents precision).
void write_estimates(const std::filesystem::path& path, OutputFormat format,
                     const std::vector<CaseEstimate>& estimates, ModelId model);

/// cmg_stats.{csv,json}: cmg, model, case_count, total, average, stdev,
/// min, max — one block per model, groups in CMG order.
void write_cmg_stats(const std::filesystem::path& path, OutputFormat format,
                     const std::vector<std::pair<ModelId, std::map<std::string, CmgStats>>>& blocks);

/// performance.{csv,json}: one column per model; rows are the three mean
/// absolute dollar errors followed by one row per relative-error bucket.
/// All tables must share the same bucket layout.
void write_performance(const std::filesystem::path& path, OutputFormat format,
                       const std::vector<PerformanceTable>& tables, const ReportOptions& options = {});

/// trace.csv: k1, k2, k3, large, very_large, small — one row per grid point
/// in grid order.
void write_trace_csv(const std::filesystem::path& path, const std::vector<TracePoint>& trace);

}  // namespace casecost
