#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "casecost/dataset.hpp"

namespace casecost {

/// True-cost process driving the generated per-case costs.
///   ProportionalToRiw: cost = weight x cost-per-weighted-case; weight-based
///     models reproduce it exactly.
///   ProportionalToLos: cost = stay units x cost per diem, with the stay
///     units built from the configured stay-type cost ratios; the per-diem
///     models reproduce it exactly (model 4 when the ratios are equal,
///     model 5 at the generating ratios).
///   Mixed: the mean of the two, so no model is exact.
enum class CostProcess { ProportionalToRiw, ProportionalToLos, Mixed };

std::string to_string(CostProcess process);
std::optional<CostProcess> parse_cost_process(std::string_view token);

struct SyntheticSpec {
    int n_cmgs = 163;
    int cases_per_cmg_min = 20;
    int cases_per_cmg_max = 80;
    CostProcess cost_process = CostProcess::Mixed;
    /// Fraction of CMG groups whose published PAC weights are one shared
    /// value while the RIW values stay distinct.
    double degenerate_pac_fraction = 0.0;
    /// Fraction of CMG groups where PAC and RIW are both one shared value.
    double degenerate_both_fraction = 0.0;
    /// Stay-type cost ratios for the LOS-driven processes (acute, ALC,
    /// special care). All 1.0 makes the true cost proportional to total LOS.
    double stay_ratio_acute = 1.0;
    double stay_ratio_alc = 1.0;
    double stay_ratio_sc = 1.0;
    std::uint64_t seed = 1;
};

struct SyntheticData {
    Dataset dataset;
    std::map<std::string, double> ground_truth;  // case_id -> true cost
};

/// Deterministic synthetic dataset with known ground truth. The benchmark
/// statistics are the exact aggregation of the per-case true costs, so
/// every downstream comparison has a trustworthy "actual" side. Degenerate
/// groups publish the group's mean implied weight as the shared value,
/// which pins the flat estimate inside the true cost spread.
/// Throws std::invalid_argument on an infeasible spec.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

/// Writes cases.csv, params.csv, benchmark.csv and ground_truth.csv.
void write_synthetic(const SyntheticData& data, const std::filesystem::path& dir);

}  // namespace casecost
