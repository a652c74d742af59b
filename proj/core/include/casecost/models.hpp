#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "casecost/dataset.hpp"
#include "casecost/types.hpp"

namespace casecost {

/// Repaired per-case weights: PAC RIW as published, except in CMG groups
/// whose PAC weights are all one identical value while the RIW values vary.
/// There each case gets its RIW rescaled so the group's weight sum is
/// preserved.
struct WeightMap {
    std::unordered_map<std::string, double> pac_mod;  // case_id -> weight
};

/// Detects degenerate weight groups by exact equality of the published
/// values (weights are published to four decimals; an exact tie is the
/// pathology, not a rounding accident). Throws if a group needs
/// redistribution but its RIW sum is zero.
WeightMap compute_pac_mod(const Dataset& dataset);

/// Model 1: weight times cost per weighted case.
CaseEstimate estimate_m1(const CaseRecord& rec, const HospitalCostParams& params);

/// Model 2: like model 1 with the repaired weight.
CaseEstimate estimate_m2(const CaseRecord& rec, const WeightMap& weights, const HospitalCostParams& params);

/// Ratio that rescales raw estimates so their grand total matches the
/// benchmark: sum over CMGs of (average x case_count), divided by the sum
/// of the raw estimates. Requires the estimates to cover exactly the
/// benchmark CMGs and a positive raw sum.
double normalization_factor(const std::vector<CaseEstimate>& raw_estimates,
                            const std::map<std::string, CmgStats>& benchmark);

/// Model 3: model 2 rescaled so the dataset's estimated total equals the
/// benchmark total.
std::vector<CaseEstimate> estimate_m3(const Dataset& dataset, const WeightMap& weights);

/// Model 4: total length of stay times cost per diem, rescaled to the
/// benchmark total. Zero-LOS cases get a zero estimate and a warning.
std::vector<CaseEstimate> estimate_m4(const Dataset& dataset, std::vector<Violation>* warnings = nullptr);

/// Stay-type day counts for the per-diem models. Special-care hours are
/// converted to days and subtracted from the acute stay; a negative acute
/// remainder is clamped at zero.
struct StayBreakdown {
    double acute_days = 0.0;
    double alc_days = 0.0;
    double sc_days = 0.0;
};

StayBreakdown stay_breakdown(const CaseRecord& rec);

inline double stay_units(const StayBreakdown& s, double k1, double k2, double k3) {
    return s.acute_days * k1 + s.alc_days * k2 + s.sc_days * k3;
}

/// Model 5: per-diem model with stay-type differentiation. Acute, alternate
/// and special-care days are weighted by k1, k2 and k3 before applying the
/// per-diem rate, then the result is rescaled to the benchmark total.
std::vector<CaseEstimate> estimate_m5(const Dataset& dataset, const ModelConfig& config,
                                      std::vector<Violation>* warnings = nullptr);

/// Dispatches to the per-model estimators. Hybrid is rejected here: it
/// combines per-CMG statistics, not per-case values (see hybrid_combine).
std::vector<CaseEstimate> estimate(ModelId model, const Dataset& dataset, const ModelConfig& config = {},
                                   std::vector<Violation>* warnings = nullptr);

}  // namespace casecost
