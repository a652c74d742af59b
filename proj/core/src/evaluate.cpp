#include "casecost/evaluate.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

namespace casecost {

std::vector<ErrorRecord> compute_errors(const std::map<std::string, CmgStats>& estimated,
                                        const std::map<std::string, CmgStats>& actual) {
    if (estimated.size() != actual.size()) {
        throw std::runtime_error(fmt::format("error computation: estimated side has {} CMGs, actual has {}",
                                             estimated.size(), actual.size()));
    }
    std::vector<ErrorRecord> out;
    out.reserve(actual.size());
    for (const auto& [cmg, act] : actual) {
        auto it = estimated.find(cmg);
        if (it == estimated.end()) {
            throw std::runtime_error(fmt::format("error computation: CMG '{}' has no estimated statistics", cmg));
        }
        if (act.total == 0.0) {
            throw std::runtime_error(
                fmt::format("error computation: CMG '{}' has zero actual total; relative error undefined", cmg));
        }
        const auto& est = it->second;
        ErrorRecord rec;
        rec.cmg = cmg;
        rec.e_total = est.total - act.total;
        rec.e_avg = est.average - act.average;
        rec.e_stdev = est.stdev - act.stdev;
        rec.e_min = est.min - act.min;
        rec.e_max = est.max - act.max;
        rec.rel_total = rec.e_total / act.total;
        out.push_back(std::move(rec));
    }
    return out;
}

namespace {

std::size_t bucket_index(double percent, const std::vector<Bucket>& buckets) {
    for (std::size_t i = 0; i < buckets.size(); ++i) {
        if (percent <= buckets[i].hi) {
            return i;
        }
    }
    throw std::runtime_error(fmt::format("relative error {}% exceeds the last bucket bound {}", percent,
                                         buckets.back().hi));
}

}  // namespace

std::vector<double> bucketize(const std::vector<ErrorRecord>& errors, const std::vector<Bucket>& buckets) {
    validate_buckets(buckets);
    std::vector<std::int64_t> counts(buckets.size(), 0);
    for (const auto& rec : errors) {
        ++counts[bucket_index(std::fabs(rec.rel_total) * 100.0, buckets)];
    }
    std::vector<double> p_ab(buckets.size(), 0.0);
    if (!errors.empty()) {
        for (std::size_t i = 0; i < buckets.size(); ++i) {
            p_ab[i] = 100.0 * static_cast<double>(counts[i]) / static_cast<double>(errors.size());
        }
    }
    return p_ab;
}

MeanAbsErrors mean_abs_errors(const std::vector<ErrorRecord>& errors) {
    if (errors.empty()) {
        throw std::invalid_argument("mean_abs_errors: empty error list");
    }
    MeanAbsErrors out;
    for (const auto& rec : errors) {
        out.e_avg += std::fabs(rec.e_avg);
        out.e_min += std::fabs(rec.e_min);
        out.e_max += std::fabs(rec.e_max);
        out.e_stdev += std::fabs(rec.e_stdev);
    }
    const auto n = static_cast<double>(errors.size());
    out.e_avg /= n;
    out.e_min /= n;
    out.e_max /= n;
    out.e_stdev /= n;
    return out;
}

PerformanceTable performance_table(ModelId model, const std::vector<ErrorRecord>& errors,
                                   const std::vector<Bucket>& buckets) {
    PerformanceTable table;
    table.model_id = model;
    table.buckets = buckets;
    table.p_ab = bucketize(errors, buckets);
    const auto means = mean_abs_errors(errors);
    table.mean_abs_e_avg = means.e_avg;
    table.mean_abs_e_min = means.e_min;
    table.mean_abs_e_max = means.e_max;
    table.mean_abs_e_stdev = means.e_stdev;
    table.n_groups = static_cast<std::int64_t>(errors.size());

    double sum = 0.0;
    for (double p : table.p_ab) {
        sum += p;
    }
    if (std::fabs(sum - 100.0) > 0.1) {
        throw std::runtime_error(fmt::format("bucket percentages sum to {}, expected 100", sum));
    }
    return table;
}

}  // namespace casecost
