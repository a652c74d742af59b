#include "casecost/optimize.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "casecost/aggregate.hpp"
#include "casecost/models.hpp"

namespace casecost {

std::vector<double> axis_values(const AxisRange& axis) {
    if (!(axis.lo > 0.0) || !(axis.hi >= axis.lo) || !(axis.step > 0.0)) {
        throw std::invalid_argument(
            fmt::format("invalid axis range {}:{}:{} (need 0 < lo <= hi and step > 0)", axis.lo, axis.hi, axis.step));
    }
    const auto count = static_cast<std::size_t>(std::floor((axis.hi - axis.lo) / axis.step + 1e-9)) + 1;
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) {
        values[i] = axis.lo + static_cast<double>(i) * axis.step;
    }
    return values;
}

std::size_t grid_size(const GridSpec& grid) {
    return axis_values(grid.k1).size() * axis_values(grid.k2).size() * axis_values(grid.k3).size();
}

CriterionVector criterion_vector(const PerformanceTable& table) {
    const auto expected = default_buckets();
    bool matches = table.buckets.size() == expected.size();
    for (std::size_t i = 0; matches && i < expected.size(); ++i) {
        matches = table.buckets[i].lo == expected[i].lo &&
                  (table.buckets[i].hi == expected[i].hi ||
                   (std::isinf(table.buckets[i].hi) && std::isinf(expected[i].hi)));
    }
    if (!matches) {
        throw std::invalid_argument(
            "optimization criteria are defined for the default bucket boundaries (0,5,10,15,20,30,50,inf)");
    }
    CriterionVector v;
    v.small_err_pct = table.p_ab[0] + table.p_ab[1];
    v.large_err_pct = table.p_ab[5] + table.p_ab[6];
    v.very_large_err_pct = table.p_ab[6];
    return v;
}

std::strong_ordering lex_compare(const CriterionVector& a, const CriterionVector& b, double tolerance) {
    auto component = [tolerance](double x, double y, bool lower_is_better) {
        if (std::fabs(x - y) <= tolerance) {
            return std::strong_ordering::equal;
        }
        const bool better = lower_is_better ? x < y : x > y;
        return better ? std::strong_ordering::less : std::strong_ordering::greater;
    };
    if (auto c = component(a.large_err_pct, b.large_err_pct, true); c != std::strong_ordering::equal) {
        return c;
    }
    if (auto c = component(a.very_large_err_pct, b.very_large_err_pct, true); c != std::strong_ordering::equal) {
        return c;
    }
    return component(a.small_err_pct, b.small_err_pct, false);
}

namespace {

/// Precomputed per-dataset state for repeated model-5 evaluations. Group
/// layout and all arithmetic mirror the modular pipeline exactly, so a grid
/// point evaluates to the same table as estimate -> aggregate ->
/// compute_errors -> performance_table.
struct GridContext {
    const Dataset* dataset = nullptr;
    ModelId model = ModelId::M5;
    double cpd = 0.0;
    double benchmark_sum = 0.0;               // sum of average x case_count
    std::vector<StayBreakdown> breakdowns;    // per case, dataset order
    std::vector<const CmgStats*> actual;      // per group, cmg order
    std::vector<const std::vector<std::size_t>*> group_indices;
    std::vector<std::string> group_cmg;
    std::vector<CmgStats> m3_stats;           // hybrid only, cmg order
    std::vector<Bucket> buckets = default_buckets();
};

struct PointScore {
    CriterionVector criteria;
    std::size_t point = 0;
};

/// Strict total order: criteria first, smallest grid point on ties.
bool better(const PointScore& a, const PointScore& b) {
    const auto c = lex_compare(a.criteria, b.criteria, 0.0);
    if (c != std::strong_ordering::equal) {
        return c == std::strong_ordering::less;
    }
    return a.point < b.point;
}

struct EvalScratch {
    std::vector<double> raw;
    std::vector<double> group_values;
    std::vector<ErrorRecord> errors;
};

PerformanceTable evaluate_point(const GridContext& ctx, double k1, double k2, double k3, EvalScratch& scratch) {
    const auto& cases = ctx.dataset->cases;
    scratch.raw.resize(cases.size());
    double raw_sum = 0.0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const double value = stay_units(ctx.breakdowns[i], k1, k2, k3) * ctx.cpd;
        scratch.raw[i] = value;
        raw_sum += value;
    }
    if (!(raw_sum > 0.0)) {
        throw std::runtime_error(fmt::format("normalization: raw estimate sum is {}, expected > 0", raw_sum));
    }
    const double factor = ctx.benchmark_sum / raw_sum;

    scratch.errors.resize(ctx.group_indices.size());
    for (std::size_t g = 0; g < ctx.group_indices.size(); ++g) {
        const auto& indices = *ctx.group_indices[g];
        scratch.group_values.resize(indices.size());
        for (std::size_t j = 0; j < indices.size(); ++j) {
            scratch.group_values[j] = scratch.raw[indices[j]] * factor;
        }
        const auto m5 = compute_stats(scratch.group_values);

        const CmgStats& act = *ctx.actual[g];
        ErrorRecord& rec = scratch.errors[g];
        rec.cmg = ctx.group_cmg[g];
        if (ctx.model == ModelId::M5) {
            rec.e_total = m5.total - act.total;
            rec.e_avg = m5.average - act.average;
            rec.e_stdev = m5.stdev - act.stdev;
            rec.e_min = m5.min - act.min;
            rec.e_max = m5.max - act.max;
        } else {
            const CmgStats& m3 = ctx.m3_stats[g];
            const auto [min, max] = clamp_minmax_to_average(m3.average, m5.min, m5.max);
            rec.e_total = m3.total - act.total;
            rec.e_avg = m3.average - act.average;
            rec.e_stdev = m3.stdev - act.stdev;
            rec.e_min = min - act.min;
            rec.e_max = max - act.max;
        }
        rec.rel_total = rec.e_total / act.total;
    }
    return performance_table(ctx.model, scratch.errors, ctx.buckets);
}

}  // namespace

OptimizeResult grid_search(const Dataset& dataset, const GridSpec& grid, ModelId model, unsigned threads,
                           bool keep_trace) {
    if (model != ModelId::M5 && model != ModelId::Hybrid) {
        throw std::invalid_argument(
            fmt::format("grid search optimizes the stay-type coefficients of m5 or hybrid, not {}", to_string(model)));
    }
    const auto k1_values = axis_values(grid.k1);
    const auto k2_values = axis_values(grid.k2);
    const auto k3_values = axis_values(grid.k3);
    const std::size_t n_points = k1_values.size() * k2_values.size() * k3_values.size();
    if (n_points == 0) {
        throw std::invalid_argument("empty coefficient grid");
    }
    if (n_points > grid.max_points) {
        throw std::invalid_argument(
            fmt::format("grid has {} points, exceeding the cap of {}", n_points, grid.max_points));
    }
    if (dataset.cases.empty()) {
        throw std::invalid_argument("grid search needs a nonempty dataset");
    }

    GridContext ctx;
    ctx.dataset = &dataset;
    ctx.model = model;
    ctx.cpd = dataset.params.cpd_total;
    ctx.breakdowns.reserve(dataset.cases.size());
    double total_stay = 0.0;
    for (const auto& rec : dataset.cases) {
        const auto sb = stay_breakdown(rec);
        total_stay += sb.acute_days + sb.alc_days + sb.sc_days;
        ctx.breakdowns.push_back(sb);
    }
    if (!(total_stay > 0.0)) {
        throw std::runtime_error("all cases have zero stay; per-diem estimates are undefined");
    }
    for (const auto& [cmg, stats] : dataset.benchmark) {
        ctx.benchmark_sum += stats.average * static_cast<double>(stats.case_count);
        ctx.actual.push_back(&stats);
        ctx.group_cmg.push_back(cmg);
    }
    for (const auto& [cmg, indices] : dataset.groups) {
        (void)cmg;
        ctx.group_indices.push_back(&indices);
    }
    if (model == ModelId::Hybrid) {
        const auto stats = aggregate(estimate(ModelId::M3, dataset));
        ctx.m3_stats.reserve(stats.size());
        for (const auto& [cmg, s] : stats) {
            (void)cmg;
            ctx.m3_stats.push_back(s);
        }
    }

    auto point_coeffs = [&](std::size_t p) {
        const std::size_t n23 = k2_values.size() * k3_values.size();
        return std::array<double, 3>{k1_values[p / n23], k2_values[(p / k3_values.size()) % k2_values.size()],
                                     k3_values[p % k3_values.size()]};
    };

    std::vector<TracePoint> trace(keep_trace ? n_points : 0);

    unsigned n_threads = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
    n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, n_points));

    std::vector<PointScore> local_best(n_threads);
    std::vector<std::string> failures(n_threads);
    const std::size_t chunk = (n_points + n_threads - 1) / n_threads;

    auto worker = [&](unsigned t) {
        const std::size_t begin = static_cast<std::size_t>(t) * chunk;
        const std::size_t end = std::min(begin + chunk, n_points);
        EvalScratch scratch;
        PointScore best{{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 0.0},
                        n_points};
        try {
            for (std::size_t p = begin; p < end; ++p) {
                const auto [k1, k2, k3] = point_coeffs(p);
                const auto table = evaluate_point(ctx, k1, k2, k3, scratch);
                const PointScore score{criterion_vector(table), p};
                if (keep_trace) {
                    trace[p] = TracePoint{k1, k2, k3, score.criteria};
                }
                if (better(score, best)) {
                    best = score;
                }
            }
        } catch (const std::exception& e) {
            failures[t] = e.what();
        }
        local_best[t] = best;
    };

    if (n_threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) {
            pool.emplace_back(worker, t);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    for (const auto& failure : failures) {
        if (!failure.empty()) {
            throw std::runtime_error(failure);
        }
    }

    PointScore best = local_best[0];
    for (unsigned t = 1; t < n_threads; ++t) {
        if (better(local_best[t], best)) {
            best = local_best[t];
        }
    }

    OptimizeResult result;
    const auto [k1, k2, k3] = point_coeffs(best.point);
    result.k1 = k1;
    result.k2 = k2;
    result.k3 = k3;
    result.criteria = best.criteria;
    EvalScratch scratch;
    result.table = evaluate_point(ctx, k1, k2, k3, scratch);
    result.trace = std::move(trace);
    return result;
}

}  // namespace casecost
