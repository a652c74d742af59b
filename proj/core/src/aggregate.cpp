#include "casecost/aggregate.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

namespace casecost {

StatsValues compute_stats(std::span<const double> values, StdevMode mode) {
    if (values.empty()) {
        throw std::invalid_argument("compute_stats: empty value list");
    }
    StatsValues out;
    out.count = static_cast<std::int64_t>(values.size());
    out.min = values.front();
    out.max = values.front();
    for (double v : values) {
        out.total += v;
        if (v < out.min) {
            out.min = v;
        }
        if (v > out.max) {
            out.max = v;
        }
    }
    out.average = out.total / static_cast<double>(out.count);
    if (out.count > 1) {
        double ss = 0.0;
        for (double v : values) {
            const double d = v - out.average;
            ss += d * d;
        }
        const double denom =
            mode == StdevMode::Sample ? static_cast<double>(out.count - 1) : static_cast<double>(out.count);
        out.stdev = std::sqrt(ss / denom);
    }
    return out;
}

std::map<std::string, CmgStats> aggregate(const std::vector<CaseEstimate>& estimates, StdevMode mode) {
    if (estimates.empty()) {
        throw std::invalid_argument("aggregate: empty estimate list");
    }
    std::map<std::string, std::vector<double>> grouped;
    for (const auto& est : estimates) {
        grouped[est.cmg].push_back(est.cce);
    }
    std::map<std::string, CmgStats> out;
    for (const auto& [cmg, values] : grouped) {
        const auto s = compute_stats(values, mode);
        out.emplace(cmg, CmgStats{cmg, s.count, s.total, s.average, s.stdev, s.min, s.max});
    }
    return out;
}

std::map<std::string, CmgStats> hybrid_combine(const std::map<std::string, CmgStats>& primary,
                                               const std::map<std::string, CmgStats>& minmax,
                                               std::vector<Violation>* warnings) {
    if (primary.size() != minmax.size()) {
        throw std::runtime_error(fmt::format("hybrid_combine: CMG coverage mismatch ({} vs {} groups)",
                                             primary.size(), minmax.size()));
    }
    std::map<std::string, CmgStats> out;
    for (const auto& [cmg, p] : primary) {
        auto it = minmax.find(cmg);
        if (it == minmax.end()) {
            throw std::runtime_error(fmt::format("hybrid_combine: CMG '{}' missing from the min/max statistics", cmg));
        }
        CmgStats combined = p;
        auto [min, max] = clamp_minmax_to_average(p.average, it->second.min, it->second.max);
        if (warnings != nullptr && min != it->second.min) {
            warnings->push_back({Severity::Warning,
                                 fmt::format("cmg {}: replacement min {} exceeds average {}; widened to the average",
                                             cmg, it->second.min, p.average)});
        }
        if (warnings != nullptr && max != it->second.max) {
            warnings->push_back({Severity::Warning,
                                 fmt::format("cmg {}: replacement max {} falls below average {}; widened to the average",
                                             cmg, it->second.max, p.average)});
        }
        combined.min = min;
        combined.max = max;
        out.emplace(cmg, std::move(combined));
    }
    return out;
}

}  // namespace casecost
