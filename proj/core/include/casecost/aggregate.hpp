#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "casecost/types.hpp"

namespace casecost {

/// Standard-deviation convention for group statistics. Sample (n-1) is the
/// default reporting convention; Population (n) is available for
/// sensitivity checks. A singleton group has stdev 0 under either.
enum class StdevMode { Sample, Population };

struct StatsValues {
    std::int64_t count = 0;
    double total = 0.0;
    double average = 0.0;
    double stdev = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Count, total, average, stdev, min and max of a nonempty value list, in
/// full double precision. Shared by the estimate aggregation, the synthetic
/// benchmark builder and the optimizer so that all three agree bit for bit.
StatsValues compute_stats(std::span<const double> values, StdevMode mode = StdevMode::Sample);

/// Collapses per-case estimates into per-CMG statistics.
std::map<std::string, CmgStats> aggregate(const std::vector<CaseEstimate>& estimates,
                                          StdevMode mode = StdevMode::Sample);

/// Widens [min, max] so it contains the average. Used when min/max come
/// from a different model than the average.
inline std::pair<double, double> clamp_minmax_to_average(double average, double min, double max) {
    if (min > average) {
        min = average;
    }
    if (max < average) {
        max = average;
    }
    return {min, max};
}

/// Combines two models' statistics: total, average, stdev and count come
/// from primary; min and max come from minmax. When a replaced bound
/// crosses the primary average it is widened back to the average and a
/// warning is emitted.
std::map<std::string, CmgStats> hybrid_combine(const std::map<std::string, CmgStats>& primary,
                                               const std::map<std::string, CmgStats>& minmax,
                                               std::vector<Violation>* warnings = nullptr);

}  // namespace casecost
