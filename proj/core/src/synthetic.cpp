#include "casecost/synthetic.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "casecost/aggregate.hpp"
#include "casecost/csv.hpp"
#include "casecost/models.hpp"
#include "casecost/rng.hpp"

namespace casecost {

std::string to_string(CostProcess process) {
    switch (process) {
    case CostProcess::ProportionalToRiw:
        return "riw";
    case CostProcess::ProportionalToLos:
        return "los";
    case CostProcess::Mixed:
        return "mixed";
    }
    throw std::logic_error("unknown cost process");
}

std::optional<CostProcess> parse_cost_process(std::string_view token) {
    if (token == "riw") {
        return CostProcess::ProportionalToRiw;
    }
    if (token == "los") {
        return CostProcess::ProportionalToLos;
    }
    if (token == "mixed") {
        return CostProcess::Mixed;
    }
    return std::nullopt;
}

namespace {

constexpr double kCpwc = 6000.0;
constexpr double kCpdTotal = 1600.0;
constexpr double kCpdDirect = 960.0;
constexpr double kCpdOverhead = 640.0;

enum class GroupKind { Normal, DegeneratePac, DegenerateBoth };

double round4(double v) { return std::nearbyint(v * 10000.0) / 10000.0; }
double round1(double v) { return std::nearbyint(v * 10.0) / 10.0; }

void validate_spec(const SyntheticSpec& spec) {
    if (spec.n_cmgs < 1) {
        throw std::invalid_argument(fmt::format("n_cmgs must be >= 1, got {}", spec.n_cmgs));
    }
    if (spec.cases_per_cmg_min < 1 || spec.cases_per_cmg_max < spec.cases_per_cmg_min) {
        throw std::invalid_argument(fmt::format("invalid cases_per_cmg range [{}, {}]", spec.cases_per_cmg_min,
                                                spec.cases_per_cmg_max));
    }
    for (const auto& [name, f] : {std::pair{"degenerate_pac_fraction", spec.degenerate_pac_fraction},
                                  std::pair{"degenerate_both_fraction", spec.degenerate_both_fraction}}) {
        if (!(f >= 0.0 && f <= 1.0)) {
            throw std::invalid_argument(fmt::format("{} must be in [0, 1], got {}", name, f));
        }
    }
    if (!(spec.stay_ratio_acute > 0.0) || !(spec.stay_ratio_alc > 0.0) || !(spec.stay_ratio_sc > 0.0)) {
        throw std::invalid_argument("stay cost ratios must be positive");
    }
}

}  // namespace

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
    validate_spec(spec);

    const auto n = static_cast<std::size_t>(spec.n_cmgs);
    const auto n_pac = static_cast<std::size_t>(std::llround(spec.degenerate_pac_fraction * static_cast<double>(n)));
    const auto n_both = static_cast<std::size_t>(std::llround(spec.degenerate_both_fraction * static_cast<double>(n)));
    if (n_pac + n_both > n) {
        throw std::invalid_argument(
            fmt::format("degeneracy fractions request {} + {} groups out of {}", n_pac, n_both, n));
    }

    Rng rng(spec.seed);

    std::vector<GroupKind> kinds(n, GroupKind::Normal);
    std::fill_n(kinds.begin(), n_pac, GroupKind::DegeneratePac);
    std::fill_n(kinds.begin() + static_cast<std::ptrdiff_t>(n_pac), n_both, GroupKind::DegenerateBoth);
    rng.shuffle(kinds);

    // CMG codes start at 100, zero-padded to a fixed width so string order
    // matches generation order.
    std::size_t code_width = 3;
    for (std::size_t v = 99 + n; v >= 1000; v /= 10) {
        ++code_width;
    }

    std::vector<CaseRecord> cases;
    std::map<std::string, CmgStats> benchmark;
    std::map<std::string, double> ground_truth;
    double total_cost = 0.0;
    std::int64_t total_days = 0;
    std::size_t case_counter = 0;

    for (std::size_t g = 0; g < n; ++g) {
        const std::string cmg = fmt::format("{:0{}}", 100 + g, code_width);
        const GroupKind kind = kinds[g];

        // Degenerate patterns need at least two cases to be observable.
        const int lo = kind == GroupKind::Normal ? spec.cases_per_cmg_min : std::max(2, spec.cases_per_cmg_min);
        const int hi = std::max(lo, spec.cases_per_cmg_max);
        const auto n_cases = static_cast<std::size_t>(rng.uniform_int(lo, hi));

        const double scale = rng.uniform(0.4, 4.0);
        const auto profile = rng.uniform_int(0, 3);  // 0 acute only, 1 +alc, 2 +sc, 3 +both

        std::vector<double> implied_weights(n_cases);
        std::vector<CaseRecord> group(n_cases);
        std::set<double> seen_weights;
        for (std::size_t i = 0; i < n_cases; ++i) {
            double w = round4(std::max(0.0001, scale * rng.uniform(0.6, 1.8)));
            if (kind == GroupKind::DegeneratePac) {
                // Published RIW values must stay distinct within the group.
                while (!seen_weights.insert(w).second) {
                    w = round4(w + 0.0001);
                }
            }
            implied_weights[i] = w;

            CaseRecord rec;
            rec.case_id = fmt::format("C{:07}", ++case_counter);
            rec.cmg = cmg;
            rec.los_acute = static_cast<int>(std::clamp<std::int64_t>(std::llround(w * rng.uniform(2.0, 8.0)), 1, 90));
            rec.los_alc = (profile == 1 || profile == 3) && rng.bernoulli(0.45)
                              ? static_cast<int>(rng.uniform_int(1, 12))
                              : 0;
            rec.sc_hours = (profile == 2 || profile == 3) && rng.bernoulli(0.5)
                               ? round1(rng.uniform(1.0, 24.0 * std::min(rec.los_acute, 5)))
                               : 0.0;
            rec.los_total = rec.los_acute + rec.los_alc;
            group[i] = std::move(rec);
        }

        // A normal group must not be accidentally flat.
        if (kind == GroupKind::Normal && n_cases >= 2 &&
            std::all_of(implied_weights.begin(), implied_weights.end(),
                        [&](double w) { return w == implied_weights.front(); })) {
            implied_weights.back() = round4(implied_weights.back() + 0.0001);
        }

        std::vector<double> costs(n_cases);
        for (std::size_t i = 0; i < n_cases; ++i) {
            // Weight fields are provisional here; only the stay fields matter.
            group[i].pac_riw = implied_weights[i];
            group[i].riw = implied_weights[i];
            const double su = stay_units(stay_breakdown(group[i]), spec.stay_ratio_acute, spec.stay_ratio_alc,
                                         spec.stay_ratio_sc);
            switch (spec.cost_process) {
            case CostProcess::ProportionalToRiw:
                costs[i] = implied_weights[i] * kCpwc;
                break;
            case CostProcess::ProportionalToLos:
                costs[i] = su * kCpdTotal;
                break;
            case CostProcess::Mixed:
                costs[i] = 0.5 * (implied_weights[i] * kCpwc) + 0.5 * (su * kCpdTotal);
                break;
            }
        }

        if (kind != GroupKind::Normal) {
            // The shared published weight is the group's mean implied weight,
            // so the flat estimate lands inside the true cost spread.
            double cost_sum = 0.0;
            for (double c : costs) {
                cost_sum += c;
            }
            const double flat = std::max(0.0001, round4(cost_sum / static_cast<double>(n_cases) / kCpwc));
            for (auto& rec : group) {
                rec.pac_riw = flat;
                if (kind == GroupKind::DegenerateBoth) {
                    rec.riw = flat;
                }
            }
        }

        const auto s = compute_stats(costs, StdevMode::Sample);
        benchmark.emplace(cmg, CmgStats{cmg, s.count, s.total, s.average, s.stdev, s.min, s.max});
        for (std::size_t i = 0; i < n_cases; ++i) {
            ground_truth.emplace(group[i].case_id, costs[i]);
            total_cost += costs[i];
            total_days += group[i].los_total;
            cases.push_back(std::move(group[i]));
        }
    }

    HospitalCostParams params;
    params.cpwc = kCpwc;
    params.cpd_total = kCpdTotal;
    params.cpd_direct = kCpdDirect;
    params.cpd_overhead = kCpdOverhead;
    params.acute_expenses = total_cost;
    params.total_patient_days = total_days;

    SyntheticData data;
    data.dataset = make_dataset(std::move(cases), params, std::move(benchmark));
    data.ground_truth = std::move(ground_truth);
    return data;
}

void write_synthetic(const SyntheticData& data, const std::filesystem::path& dir) {
    write_dataset(data.dataset, dir);
    csv::Table truth;
    truth.header = {"case_id", "true_cost"};
    for (const auto& [case_id, cost] : data.ground_truth) {
        truth.rows.push_back({case_id, format_money(cost)});
    }
    csv::write_file(dir / "ground_truth.csv", truth);
}

}  // namespace casecost
