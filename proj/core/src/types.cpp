#include "casecost/types.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace casecost {

std::string to_string(ModelId id) {
    switch (id) {
    case ModelId::M1:
        return "m1";
    case ModelId::M2:
        return "m2";
    case ModelId::M3:
        return "m3";
    case ModelId::M4:
        return "m4";
    case ModelId::M5:
        return "m5";
    case ModelId::Hybrid:
        return "hybrid";
    }
    throw std::logic_error("unknown model id");
}

std::optional<ModelId> parse_model_id(std::string_view token) {
    std::string lower{token};
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "m1") {
        return ModelId::M1;
    }
    if (lower == "m2") {
        return ModelId::M2;
    }
    if (lower == "m3") {
        return ModelId::M3;
    }
    if (lower == "m4") {
        return ModelId::M4;
    }
    if (lower == "m5") {
        return ModelId::M5;
    }
    if (lower == "hybrid") {
        return ModelId::Hybrid;
    }
    return std::nullopt;
}

bool has_errors(const std::vector<Violation>& violations) {
    return std::any_of(violations.begin(), violations.end(),
                       [](const Violation& v) { return v.severity == Severity::Error; });
}

namespace {

void add(std::vector<Violation>& out, Severity severity, std::string message) {
    out.push_back(Violation{severity, std::move(message)});
}

}  // namespace

std::vector<Violation> validate_case(const CaseRecord& rec) {
    std::vector<Violation> out;
    const auto& id = rec.case_id;
    if (!(rec.pac_riw >= 0.0) || !std::isfinite(rec.pac_riw)) {
        add(out, Severity::Error, fmt::format("case {}: pac_riw must be nonnegative, got {}", id, rec.pac_riw));
    }
    if (!(rec.riw >= 0.0) || !std::isfinite(rec.riw)) {
        add(out, Severity::Error, fmt::format("case {}: riw must be nonnegative, got {}", id, rec.riw));
    }
    if (rec.los_total < 0) {
        add(out, Severity::Error, fmt::format("case {}: los_total must be nonnegative, got {}", id, rec.los_total));
    }
    if (rec.los_acute < 0) {
        add(out, Severity::Error, fmt::format("case {}: los_acute must be nonnegative, got {}", id, rec.los_acute));
    }
    if (rec.los_alc < 0) {
        add(out, Severity::Error, fmt::format("case {}: los_alc must be nonnegative, got {}", id, rec.los_alc));
    }
    if (!(rec.sc_hours >= 0.0) || !std::isfinite(rec.sc_hours)) {
        add(out, Severity::Error, fmt::format("case {}: sc_hours must be nonnegative, got {}", id, rec.sc_hours));
    }
    if (has_errors(out)) {
        return out;
    }
    if (rec.los_acute + rec.los_alc != rec.los_total) {
        add(out, Severity::Warning,
            fmt::format("case {}: los_acute + los_alc = {} does not match los_total = {}", id,
                        rec.los_acute + rec.los_alc, rec.los_total));
    }
    if (rec.sc_hours > 24.0 * rec.los_acute) {
        add(out, Severity::Warning,
            fmt::format("case {}: special care hours {} exceed the acute stay of {} days; "
                        "the acute term will be clamped at zero",
                        id, rec.sc_hours, rec.los_acute));
    }
    return out;
}

std::vector<Violation> validate_params(const HospitalCostParams& params) {
    std::vector<Violation> out;
    if (!(params.cpwc > 0.0) || !std::isfinite(params.cpwc)) {
        add(out, Severity::Error, fmt::format("cpwc must be positive, got {}", params.cpwc));
    }
    if (!(params.cpd_total > 0.0) || !std::isfinite(params.cpd_total)) {
        add(out, Severity::Error, fmt::format("cpd_total must be positive, got {}", params.cpd_total));
    }
    for (const auto& [name, value] :
         {std::pair{"cpd_direct", params.cpd_direct}, std::pair{"cpd_overhead", params.cpd_overhead},
          std::pair{"acute_expenses", params.acute_expenses}}) {
        if (value && !(*value > 0.0)) {
            add(out, Severity::Error, fmt::format("{} must be positive when present, got {}", name, *value));
        }
    }
    if (params.total_patient_days && *params.total_patient_days <= 0) {
        add(out, Severity::Error,
            fmt::format("total_patient_days must be positive when present, got {}", *params.total_patient_days));
    }
    if (params.cpd_direct && params.cpd_overhead) {
        const double sum = *params.cpd_direct + *params.cpd_overhead;
        if (std::fabs(sum - params.cpd_total) > 0.01) {
            add(out, Severity::Error,
                fmt::format("cpd_direct + cpd_overhead = {} differs from cpd_total = {} by more than one cent", sum,
                            params.cpd_total));
        }
    }
    return out;
}

std::vector<Violation> validate_stats(const CmgStats& stats) {
    std::vector<Violation> out;
    const auto& cmg = stats.cmg;
    if (stats.case_count <= 0) {
        add(out, Severity::Error, fmt::format("cmg {}: case_count must be positive, got {}", cmg, stats.case_count));
        return out;
    }
    if (!(stats.stdev >= 0.0)) {
        add(out, Severity::Error, fmt::format("cmg {}: stdev must be nonnegative, got {}", cmg, stats.stdev));
    }
    // Small slack: the stats may have been rounded to cents on serialization.
    const double slack = 0.011 + 1e-9 * std::fabs(stats.average);
    if (stats.min > stats.average + slack || stats.average > stats.max + slack) {
        add(out, Severity::Error,
            fmt::format("cmg {}: min <= average <= max violated ({} / {} / {})", cmg, stats.min, stats.average,
                        stats.max));
    }
    if (std::fabs(stats.total - stats.average * static_cast<double>(stats.case_count)) >
        0.01 * static_cast<double>(stats.case_count)) {
        add(out, Severity::Error,
            fmt::format("cmg {}: total {} is not average x case_count = {}", cmg, stats.total,
                        stats.average * static_cast<double>(stats.case_count)));
    }
    if (stats.case_count == 1) {
        if (stats.stdev != 0.0) {
            add(out, Severity::Error, fmt::format("cmg {}: single-case group must have stdev 0", cmg));
        }
        if (std::fabs(stats.min - stats.max) > slack || std::fabs(stats.min - stats.average) > slack) {
            add(out, Severity::Error, fmt::format("cmg {}: single-case group must have min = max = average", cmg));
        }
    }
    return out;
}

std::vector<Bucket> default_buckets() {
    return {{0.0, 5.0},  {5.0, 10.0}, {10.0, 15.0},
            {15.0, 20.0}, {20.0, 30.0}, {30.0, 50.0},
            {50.0, std::numeric_limits<double>::infinity()}};
}

void validate_buckets(const std::vector<Bucket>& buckets) {
    if (buckets.empty()) {
        throw std::invalid_argument("bucket list must not be empty");
    }
    if (buckets.front().lo != 0.0) {
        throw std::invalid_argument("first bucket must start at 0");
    }
    for (std::size_t i = 0; i < buckets.size(); ++i) {
        const auto& b = buckets[i];
        if (!(b.hi > b.lo)) {
            throw std::invalid_argument(
                fmt::format("bucket {} has non-ascending bounds ({}, {})", i, b.lo, b.hi));
        }
        if (std::isinf(b.hi) && i + 1 != buckets.size()) {
            throw std::invalid_argument("only the last bucket may be unbounded");
        }
        if (i > 0 && buckets[i - 1].hi != b.lo) {
            throw std::invalid_argument(
                fmt::format("buckets {} and {} are not contiguous", i - 1, i));
        }
    }
}

void validate_config(const ModelConfig& config) {
    if (!(config.k1 > 0.0) || !(config.k2 > 0.0) || !(config.k3 > 0.0)) {
        throw std::invalid_argument(fmt::format("stay-type multipliers must be positive, got k1={} k2={} k3={}",
                                                config.k1, config.k2, config.k3));
    }
    validate_buckets(config.buckets);
}

double round_cents(double dollars) {
    // nearbyint under the default rounding mode rounds ties to even.
    return std::nearbyint(dollars * 100.0) / 100.0;
}

std::string format_money(double dollars) {
    return fmt::format("{:.2f}", round_cents(dollars));
}

std::string format_number(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("number formatting failed");
    }
    return std::string(buf, ptr);
}

}  // namespace casecost
