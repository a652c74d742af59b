#pragma once

#include <compare>
#include <cstddef>
#include <vector>

#include "casecost/dataset.hpp"
#include "casecost/evaluate.hpp"
#include "casecost/types.hpp"

namespace casecost {

/// One coefficient axis: lo, lo+step, ... up to hi inclusive. A degenerate
/// range (lo == hi) is a single point.
struct AxisRange {
    double lo = 0.0;
    double hi = 0.0;
    double step = 1.0;
};

std::vector<double> axis_values(const AxisRange& axis);

struct GridSpec {
    AxisRange k1;
    AxisRange k2;
    AxisRange k3;
    std::size_t max_points = 1'000'000;
};

std::size_t grid_size(const GridSpec& grid);

/// The sequenced optimization criteria, all in percent of CMG groups:
/// large errors (over 30%) and very large errors (over 50%) are minimized,
/// small errors (at most 10%) are maximized, in that order.
struct CriterionVector {
    double large_err_pct = 0.0;
    double very_large_err_pct = 0.0;
    double small_err_pct = 0.0;
};

/// Derives the criteria from a performance table. The criteria are pinned
/// to the default bucket boundaries; other bucket layouts are rejected.
CriterionVector criterion_vector(const PerformanceTable& table);

/// Lexicographic comparison: less means a is better. Components whose
/// difference is within tolerance are ties.
std::strong_ordering lex_compare(const CriterionVector& a, const CriterionVector& b, double tolerance = 0.0);

struct TracePoint {
    double k1 = 0.0;
    double k2 = 0.0;
    double k3 = 0.0;
    CriterionVector criteria;
};

struct OptimizeResult {
    double k1 = 0.0;
    double k2 = 0.0;
    double k3 = 0.0;
    CriterionVector criteria;
    PerformanceTable table;
    std::vector<TracePoint> trace;  // grid order, filled when requested
};

/// Exhaustive search over the coefficient grid. Every point runs the full
/// pipeline (estimate, aggregate, errors, performance table, criteria);
/// the lexicographic optimum wins, ties broken by the numerically smallest
/// (k1, k2, k3). model must be M5 or Hybrid; for Hybrid the min/max side
/// varies with the coefficients while totals come from model 3.
/// threads = 0 uses the available hardware parallelism. The result is
/// deterministic regardless of thread count.
OptimizeResult grid_search(const Dataset& dataset, const GridSpec& grid, ModelId model, unsigned threads = 0,
                           bool keep_trace = false);

}  // namespace casecost
