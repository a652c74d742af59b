#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace casecost {

enum class ModelId { M1, M2, M3, M4, M5, Hybrid };

std::string to_string(ModelId id);
std::optional<ModelId> parse_model_id(std::string_view token);

enum class Severity { Warning, Error };

/// A validation finding. Violations are data: warnings are reported and
/// processing continues, errors make the surrounding operation fail.
struct Violation {
    Severity severity = Severity::Warning;
    std::string message;
};

bool has_errors(const std::vector<Violation>& violations);

/// One patient-level inpatient case, reduced to the fields the cost models
/// consume. Weight fields mirror the DAD columns PAC_RIW_WT and RIW_val;
/// stay fields mirror TotalL / AcuteL / ALClen / TotHRS.
struct CaseRecord {
    std::string case_id;
    std::string cmg;        // case mix group code, opaque token
    double pac_riw = 0.0;   // PAC relative intensity weight
    double riw = 0.0;       // CIHI relative intensity weight
    int los_total = 0;      // total length of stay, days
    int los_acute = 0;      // acute-care days
    int los_alc = 0;        // alternate-level-of-care days
    double sc_hours = 0.0;  // special care unit hours
};

/// Checks the per-case invariants. Negative weights, stay lengths or hours
/// are errors; a total LOS that differs from acute + ALC, or special-care
/// hours exceeding the acute stay, are warnings.
std::vector<Violation> validate_case(const CaseRecord& rec);

/// Hospital-level annual cost parameters.
struct HospitalCostParams {
    double cpwc = 0.0;       // cost per weighted case, dollars
    double cpd_total = 0.0;  // acute total cost per diem, dollars
    std::optional<double> cpd_direct;
    std::optional<double> cpd_overhead;
    std::optional<double> acute_expenses;
    std::optional<std::int64_t> total_patient_days;
};

std::vector<Violation> validate_params(const HospitalCostParams& params);

/// Per-CMG aggregate case cost statistics. Plays both roles: the benchmark
/// ("actual") statistics and the aggregate of model estimates.
struct CmgStats {
    std::string cmg;
    std::int64_t case_count = 0;
    double total = 0.0;
    double average = 0.0;
    double stdev = 0.0;
    double min = 0.0;
    double max = 0.0;
};

std::vector<Violation> validate_stats(const CmgStats& stats);

/// Signed estimation errors for one CMG: estimate statistic minus actual
/// statistic, plus the total error relative to the actual total.
struct ErrorRecord {
    std::string cmg;
    double e_total = 0.0;
    double e_avg = 0.0;
    double e_stdev = 0.0;
    double e_min = 0.0;
    double e_max = 0.0;
    double rel_total = 0.0;  // e_total / actual total
};

/// Relative-error interval in percent, half-open (lo, hi]; the first bucket
/// of a chain also counts exact zeros. hi may be infinity.
struct Bucket {
    double lo = 0.0;
    double hi = 0.0;
};

std::vector<Bucket> default_buckets();

/// Throws std::invalid_argument unless buckets are contiguous, ascending and
/// start at zero. Only the last bucket may be unbounded.
void validate_buckets(const std::vector<Bucket>& buckets);

/// Model selection plus the per-diem stay-type multipliers (model 5 only)
/// and the relative-error bucket boundaries used for reporting.
struct ModelConfig {
    ModelId model_id = ModelId::M1;
    double k1 = 1.3;   // acute-care per-diem multiplier
    double k2 = 0.5;   // alternate-care per-diem multiplier
    double k3 = 2.85;  // special-care per-diem multiplier
    std::vector<Bucket> buckets = default_buckets();
};

void validate_config(const ModelConfig& config);

/// One model's performance summary: percentage of CMG groups per relative
/// error bucket and the mean absolute errors of the average/min/max
/// statistics. mean_abs_e_stdev is an extension, not part of the standard
/// report layout.
struct PerformanceTable {
    ModelId model_id = ModelId::M1;
    std::vector<Bucket> buckets;
    std::vector<double> p_ab;  // percentages aligned with buckets
    double mean_abs_e_avg = 0.0;
    double mean_abs_e_min = 0.0;
    double mean_abs_e_max = 0.0;
    double mean_abs_e_stdev = 0.0;
    std::int64_t n_groups = 0;
};

/// Per-case dollar estimate produced by one model.
struct CaseEstimate {
    std::string case_id;
    std::string cmg;
    double cce = 0.0;
};

/// Rounds dollars to cents, ties to even. Computation stays in full double
/// precision; rounding applies at serialization boundaries only.
double round_cents(double dollars);

/// Fixed two-decimal rendering of round_cents(dollars).
std::string format_money(double dollars);

/// Shortest decimal form that parses back to exactly the same double.
std::string format_number(double value);

}  // namespace casecost
