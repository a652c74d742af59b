#pragma once

#include <map>
#include <string>
#include <vector>

#include "casecost/types.hpp"

namespace casecost {

/// Signed per-CMG differences, estimate minus actual, for all five
/// statistics plus the total error relative to the actual total. Requires
/// identical CMG coverage on both sides and a nonzero actual total in every
/// group. Records come back sorted by CMG code.
std::vector<ErrorRecord> compute_errors(const std::map<std::string, CmgStats>& estimated,
                                        const std::map<std::string, CmgStats>& actual);

/// Percentage of CMG groups per bucket, assigning each group by the
/// absolute relative total error in percent. Intervals are (lo, hi] with
/// the first bucket also counting exact zeros.
std::vector<double> bucketize(const std::vector<ErrorRecord>& errors, const std::vector<Bucket>& buckets);

struct MeanAbsErrors {
    double e_avg = 0.0;
    double e_min = 0.0;
    double e_max = 0.0;
    double e_stdev = 0.0;  // extension beyond the standard three
};

MeanAbsErrors mean_abs_errors(const std::vector<ErrorRecord>& errors);

PerformanceTable performance_table(ModelId model, const std::vector<ErrorRecord>& errors,
                                   const std::vector<Bucket>& buckets);

}  // namespace casecost
