#include "casecost/models.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <set>
#include <stdexcept>

namespace casecost {

WeightMap compute_pac_mod(const Dataset& dataset) {
    WeightMap wm;
    wm.pac_mod.reserve(dataset.cases.size());
    for (const auto& [cmg, indices] : dataset.groups) {
        double pac_min = dataset.cases[indices.front()].pac_riw;
        double pac_max = pac_min;
        double riw_min = dataset.cases[indices.front()].riw;
        double riw_max = riw_min;
        for (std::size_t i : indices) {
            const auto& rec = dataset.cases[i];
            pac_min = std::min(pac_min, rec.pac_riw);
            pac_max = std::max(pac_max, rec.pac_riw);
            riw_min = std::min(riw_min, rec.riw);
            riw_max = std::max(riw_max, rec.riw);
        }
        const bool pac_degenerate = pac_min == pac_max && riw_min != riw_max;
        if (pac_degenerate) {
            double pac_sum = 0.0;
            double riw_sum = 0.0;
            for (std::size_t i : indices) {
                pac_sum += dataset.cases[i].pac_riw;
                riw_sum += dataset.cases[i].riw;
            }
            if (riw_sum <= 0.0) {
                throw std::runtime_error(
                    fmt::format("cmg {}: RIW sum is zero, cannot redistribute the PAC weight", cmg));
            }
            const double factor = pac_sum / riw_sum;
            for (std::size_t i : indices) {
                wm.pac_mod.emplace(dataset.cases[i].case_id, dataset.cases[i].riw * factor);
            }
        } else {
            for (std::size_t i : indices) {
                wm.pac_mod.emplace(dataset.cases[i].case_id, dataset.cases[i].pac_riw);
            }
        }
    }
    return wm;
}

CaseEstimate estimate_m1(const CaseRecord& rec, const HospitalCostParams& params) {
    return {rec.case_id, rec.cmg, rec.pac_riw * params.cpwc};
}

CaseEstimate estimate_m2(const CaseRecord& rec, const WeightMap& weights, const HospitalCostParams& params) {
    auto it = weights.pac_mod.find(rec.case_id);
    if (it == weights.pac_mod.end()) {
        throw std::runtime_error(fmt::format("case {} is absent from the weight map", rec.case_id));
    }
    return {rec.case_id, rec.cmg, it->second * params.cpwc};
}

double normalization_factor(const std::vector<CaseEstimate>& raw_estimates,
                            const std::map<std::string, CmgStats>& benchmark) {
    std::set<std::string> covered;
    double raw_sum = 0.0;
    for (const auto& est : raw_estimates) {
        covered.insert(est.cmg);
        raw_sum += est.cce;
    }
    if (covered.size() != benchmark.size()) {
        throw std::runtime_error(fmt::format("normalization: estimates cover {} CMGs, benchmark has {}",
                                             covered.size(), benchmark.size()));
    }
    double benchmark_sum = 0.0;
    for (const auto& [cmg, stats] : benchmark) {
        if (covered.find(cmg) == covered.end()) {
            throw std::runtime_error(fmt::format("normalization: no estimates for benchmark CMG '{}'", cmg));
        }
        benchmark_sum += stats.average * static_cast<double>(stats.case_count);
    }
    if (!(raw_sum > 0.0)) {
        throw std::runtime_error(fmt::format("normalization: raw estimate sum is {}, expected > 0", raw_sum));
    }
    return benchmark_sum / raw_sum;
}

namespace {

void scale_all(std::vector<CaseEstimate>& estimates, double factor) {
    for (auto& est : estimates) {
        est.cce *= factor;
    }
}

}  // namespace

std::vector<CaseEstimate> estimate_m3(const Dataset& dataset, const WeightMap& weights) {
    std::vector<CaseEstimate> out;
    out.reserve(dataset.cases.size());
    for (const auto& rec : dataset.cases) {
        out.push_back(estimate_m2(rec, weights, dataset.params));
    }
    scale_all(out, normalization_factor(out, dataset.benchmark));
    return out;
}

std::vector<CaseEstimate> estimate_m4(const Dataset& dataset, std::vector<Violation>* warnings) {
    std::vector<CaseEstimate> out;
    out.reserve(dataset.cases.size());
    for (const auto& rec : dataset.cases) {
        if (rec.los_total == 0 && warnings != nullptr) {
            warnings->push_back(
                {Severity::Warning, fmt::format("case {}: zero length of stay, estimate is zero", rec.case_id)});
        }
        out.push_back({rec.case_id, rec.cmg, static_cast<double>(rec.los_total) * dataset.params.cpd_total});
    }
    scale_all(out, normalization_factor(out, dataset.benchmark));
    return out;
}

StayBreakdown stay_breakdown(const CaseRecord& rec) {
    const double sc_days = rec.sc_hours / 24.0;
    double acute = static_cast<double>(rec.los_acute) - sc_days;
    if (acute < 0.0) {
        acute = 0.0;
    }
    return {acute, static_cast<double>(rec.los_alc), sc_days};
}

std::vector<CaseEstimate> estimate_m5(const Dataset& dataset, const ModelConfig& config,
                                      std::vector<Violation>* warnings) {
    validate_config(config);
    std::vector<CaseEstimate> out;
    out.reserve(dataset.cases.size());
    for (const auto& rec : dataset.cases) {
        const auto sb = stay_breakdown(rec);
        if (warnings != nullptr) {
            if (static_cast<double>(rec.los_acute) < sb.sc_days) {
                warnings->push_back({Severity::Warning,
                                     fmt::format("case {}: special care days {} exceed acute days {}; "
                                                 "acute term clamped at zero",
                                                 rec.case_id, sb.sc_days, rec.los_acute)});
            }
            if (sb.acute_days == 0.0 && sb.alc_days == 0.0 && sb.sc_days == 0.0) {
                warnings->push_back(
                    {Severity::Warning, fmt::format("case {}: zero stay units, estimate is zero", rec.case_id)});
            }
        }
        const double units = stay_units(sb, config.k1, config.k2, config.k3);
        out.push_back({rec.case_id, rec.cmg, units * dataset.params.cpd_total});
    }
    scale_all(out, normalization_factor(out, dataset.benchmark));
    return out;
}

std::vector<CaseEstimate> estimate(ModelId model, const Dataset& dataset, const ModelConfig& config,
                                   std::vector<Violation>* warnings) {
    switch (model) {
    case ModelId::M1: {
        std::vector<CaseEstimate> out;
        out.reserve(dataset.cases.size());
        for (const auto& rec : dataset.cases) {
            out.push_back(estimate_m1(rec, dataset.params));
        }
        return out;
    }
    case ModelId::M2: {
        const auto weights = compute_pac_mod(dataset);
        std::vector<CaseEstimate> out;
        out.reserve(dataset.cases.size());
        for (const auto& rec : dataset.cases) {
            out.push_back(estimate_m2(rec, weights, dataset.params));
        }
        return out;
    }
    case ModelId::M3:
        return estimate_m3(dataset, compute_pac_mod(dataset));
    case ModelId::M4:
        return estimate_m4(dataset, warnings);
    case ModelId::M5:
        return estimate_m5(dataset, config, warnings);
    case ModelId::Hybrid:
        throw std::invalid_argument(
            "hybrid has no per-case estimates: it combines per-CMG statistics of models 3 and 5 "
            "(see hybrid_combine, or `report --hybrid` on the command line)");
    }
    throw std::logic_error("unknown model id");
}

}  // namespace casecost
