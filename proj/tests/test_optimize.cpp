#include <doctest.h>

#include <cmath>

#include "casecost/aggregate.hpp"
#include "casecost/evaluate.hpp"
#include "casecost/models.hpp"
#include "casecost/optimize.hpp"
#include "casecost/report.hpp"
#include "casecost/synthetic.hpp"
#include "test_util.hpp"

using namespace casecost;

namespace {

PerformanceTable table_from_p(std::vector<double> p) {
    PerformanceTable table;
    table.buckets = default_buckets();
    table.p_ab = std::move(p);
    table.n_groups = 100;
    return table;
}

/// Full-pipeline evaluation through the public modular path, independent of
/// the optimizer's internal loop.
CriterionVector pipeline_criteria(const Dataset& ds, ModelId model, double k1, double k2, double k3) {
    ModelConfig config;
    config.k1 = k1;
    config.k2 = k2;
    config.k3 = k3;
    const auto m5_stats = aggregate(estimate_m5(ds, config));
    std::map<std::string, CmgStats> stats;
    if (model == ModelId::Hybrid) {
        stats = hybrid_combine(aggregate(estimate(ModelId::M3, ds)), m5_stats);
    } else {
        stats = m5_stats;
    }
    const auto errors = compute_errors(stats, ds.benchmark);
    return criterion_vector(performance_table(model, errors, default_buckets()));
}

Dataset los_dataset(std::uint64_t seed, double r1 = 1.3, double r2 = 0.5, double r3 = 2.85) {
    SyntheticSpec spec;
    spec.n_cmgs = 18;
    spec.cases_per_cmg_min = 3;
    spec.cases_per_cmg_max = 20;
    spec.cost_process = CostProcess::ProportionalToLos;
    spec.stay_ratio_acute = r1;
    spec.stay_ratio_alc = r2;
    spec.stay_ratio_sc = r3;
    spec.seed = seed;
    return generate_synthetic(spec).dataset;
}

}  // namespace

TEST_CASE("criterion vector sums the large, very large and small buckets") {
    const auto a = criterion_vector(table_from_p({20, 22, 13, 13, 15, 11, 7}));
    CHECK(a.large_err_pct == doctest::Approx(18));
    CHECK(a.very_large_err_pct == doctest::Approx(7));
    CHECK(a.small_err_pct == doctest::Approx(42));

    const auto b = criterion_vector(table_from_p({7, 6, 6, 6, 18, 26, 31}));
    CHECK(b.large_err_pct == doctest::Approx(57));
    CHECK(b.very_large_err_pct == doctest::Approx(31));
    CHECK(b.small_err_pct == doctest::Approx(13));

    const auto c = criterion_vector(table_from_p({100, 0, 0, 0, 0, 0, 0}));
    CHECK(c.large_err_pct == 0.0);
    CHECK(c.very_large_err_pct == 0.0);
    CHECK(c.small_err_pct == 100.0);
}

TEST_CASE("criterion vector requires the default bucket layout") {
    PerformanceTable table;
    table.buckets = {{0, 30}, {30, std::numeric_limits<double>::infinity()}};
    table.p_ab = {60, 40};
    CHECK_THROWS_AS(criterion_vector(table), std::invalid_argument);
}

TEST_CASE("lexicographic comparison applies the criteria in sequence") {
    const CriterionVector a{10, 2, 50};
    CHECK(lex_compare(a, CriterionVector{12, 0, 90}) == std::strong_ordering::less);
    CHECK(lex_compare(a, CriterionVector{10, 1, 40}) == std::strong_ordering::greater);
    CHECK(lex_compare(a, CriterionVector{10, 2, 60}) == std::strong_ordering::greater);
    CHECK(lex_compare(a, a) == std::strong_ordering::equal);

    SUBCASE("tolerance turns near-ties into ties") {
        CHECK(lex_compare(a, CriterionVector{10.05, 2, 60}, 0.1) == std::strong_ordering::greater);
        CHECK(lex_compare(a, CriterionVector{10.05, 2, 50}, 0.1) == std::strong_ordering::equal);
    }
}

TEST_CASE("axis expansion") {
    const auto single = axis_values(AxisRange{1.3, 1.3, 1.0});
    REQUIRE(single.size() == 1);
    CHECK(single[0] == 1.3);

    const auto ladder = axis_values(AxisRange{1.0, 2.0, 0.1});
    REQUIRE(ladder.size() == 11);
    CHECK(ladder.front() == 1.0);
    CHECK(ladder.back() == doctest::Approx(2.0));

    CHECK_THROWS_AS(axis_values(AxisRange{0.0, 1.0, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(axis_values(AxisRange{1.0, 0.5, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(axis_values(AxisRange{1.0, 2.0, 0.0}), std::invalid_argument);

    GridSpec grid;
    grid.k1 = {1.0, 2.0, 0.5};
    grid.k2 = {0.5, 0.5, 1.0};
    grid.k3 = {2.0, 3.0, 0.5};
    CHECK(grid_size(grid) == 9);
}

TEST_CASE("a singleton grid returns its only point") {
    const auto ds = los_dataset(41);
    GridSpec grid;
    grid.k1 = {1.3, 1.3, 1.0};
    grid.k2 = {0.5, 0.5, 1.0};
    grid.k3 = {2.85, 2.85, 1.0};
    const auto result = grid_search(ds, grid, ModelId::M5);
    CHECK(result.k1 == 1.3);
    CHECK(result.k2 == 0.5);
    CHECK(result.k3 == 2.85);
}

TEST_CASE("grid search rejects bad inputs") {
    const auto ds = los_dataset(42);
    GridSpec grid;
    grid.k1 = {1.0, 2.0, 0.5};
    grid.k2 = {0.25, 0.75, 0.25};
    grid.k3 = {2.0, 3.0, 0.5};

    CHECK_THROWS_AS(grid_search(ds, grid, ModelId::M1), std::invalid_argument);

    GridSpec capped = grid;
    capped.max_points = 10;
    CHECK_THROWS_WITH_AS(grid_search(ds, capped, ModelId::M5), doctest::Contains("cap"), std::invalid_argument);
}

TEST_CASE("grid search equals independent exhaustive enumeration") {
    const auto ds = los_dataset(43);
    GridSpec grid;
    grid.k1 = {0.9, 1.7, 0.4};    // 3 values
    grid.k2 = {0.25, 0.75, 0.25};  // 3 values
    grid.k3 = {2.0, 3.0, 0.5};    // 3 values

    for (auto model : {ModelId::M5, ModelId::Hybrid}) {
        CAPTURE(to_string(model));
        const auto result = grid_search(ds, grid, model, 2, true);
        REQUIRE(result.trace.size() == 27);

        // Brute force through the public pipeline, documented tie-break.
        bool have_best = false;
        double bk1 = 0.0;
        double bk2 = 0.0;
        double bk3 = 0.0;
        CriterionVector best{};
        std::size_t index = 0;
        for (double k1 : axis_values(grid.k1)) {
            for (double k2 : axis_values(grid.k2)) {
                for (double k3 : axis_values(grid.k3)) {
                    const auto crit = pipeline_criteria(ds, model, k1, k2, k3);

                    const auto& traced = result.trace[index];
                    CHECK(traced.k1 == k1);
                    CHECK(traced.k2 == k2);
                    CHECK(traced.k3 == k3);
                    CHECK(traced.criteria.large_err_pct == crit.large_err_pct);
                    CHECK(traced.criteria.very_large_err_pct == crit.very_large_err_pct);
                    CHECK(traced.criteria.small_err_pct == crit.small_err_pct);
                    ++index;

                    if (!have_best || lex_compare(crit, best) == std::strong_ordering::less) {
                        have_best = true;
                        best = crit;
                        bk1 = k1;
                        bk2 = k2;
                        bk3 = k3;
                    }
                }
            }
        }
        CHECK(result.k1 == bk1);
        CHECK(result.k2 == bk2);
        CHECK(result.k3 == bk3);
        CHECK(result.criteria.large_err_pct == best.large_err_pct);
        CHECK(result.criteria.very_large_err_pct == best.very_large_err_pct);
        CHECK(result.criteria.small_err_pct == best.small_err_pct);

        // The optimum is never lex-worse than any grid point.
        for (const auto& point : result.trace) {
            CHECK(lex_compare(result.criteria, point.criteria) != std::strong_ordering::greater);
        }
    }
}

TEST_CASE("grid search is deterministic across runs and thread counts") {
    const auto ds = los_dataset(44);
    GridSpec grid;
    grid.k1 = {1.0, 1.6, 0.3};
    grid.k2 = {0.4, 0.6, 0.1};
    grid.k3 = {2.5, 3.0, 0.25};

    const auto a = grid_search(ds, grid, ModelId::M5, 1, true);
    const auto b = grid_search(ds, grid, ModelId::M5, 4, true);
    CHECK(a.k1 == b.k1);
    CHECK(a.k2 == b.k2);
    CHECK(a.k3 == b.k3);

    testutil::TempDir dir;
    write_trace_csv(dir.path / "a.csv", a.trace);
    write_trace_csv(dir.path / "b.csv", b.trace);
    CHECK(testutil::read_text(dir.path / "a.csv") == testutil::read_text(dir.path / "b.csv"));
}

TEST_CASE("refining the grid never yields a lex-worse optimum") {
    const auto ds = los_dataset(45);
    GridSpec coarse;
    coarse.k1 = {1.0, 2.0, 0.5};
    coarse.k2 = {0.25, 0.75, 0.25};
    coarse.k3 = {2.0, 3.0, 0.5};
    GridSpec fine = coarse;  // power-of-two halving keeps the coarse points exactly
    fine.k1.step = 0.25;
    fine.k2.step = 0.125;
    fine.k3.step = 0.25;

    const auto a = grid_search(ds, coarse, ModelId::M5);
    const auto b = grid_search(ds, fine, ModelId::M5);
    CHECK(lex_compare(b.criteria, a.criteria) != std::strong_ordering::greater);
}

TEST_CASE("the generating stay ratios win a grid that contains them") {
    const auto ds = los_dataset(46, 1.3, 0.5, 2.85);
    GridSpec grid;
    grid.k1 = {0.65, 2.6, 0.65};   // 0.65, 1.3, 1.95, 2.6
    grid.k2 = {0.25, 1.0, 0.25};   // 0.25, 0.5, 0.75, 1.0
    grid.k3 = {1.425, 5.7, 1.425}; // 1.425, 2.85, 4.275, 5.7
    const auto result = grid_search(ds, grid, ModelId::M5);
    CHECK(result.k1 == doctest::Approx(1.3));
    CHECK(result.k2 == doctest::Approx(0.5));
    CHECK(result.k3 == doctest::Approx(2.85));
    CHECK(result.criteria.large_err_pct == 0.0);
    CHECK(result.criteria.very_large_err_pct == 0.0);
    CHECK(result.criteria.small_err_pct == 100.0);
}

TEST_CASE("hybrid criteria do not depend on the coefficients") {
    // Hybrid totals come from model 3, so every grid point scores the same
    // and the tie-break selects the smallest triple.
    const auto ds = los_dataset(47);
    GridSpec grid;
    grid.k1 = {1.0, 1.5, 0.25};
    grid.k2 = {0.5, 0.75, 0.25};
    grid.k3 = {2.0, 2.5, 0.25};
    const auto result = grid_search(ds, grid, ModelId::Hybrid, 2, true);
    for (const auto& point : result.trace) {
        CHECK(point.criteria.large_err_pct == result.criteria.large_err_pct);
        CHECK(point.criteria.very_large_err_pct == result.criteria.very_large_err_pct);
        CHECK(point.criteria.small_err_pct == result.criteria.small_err_pct);
    }
    CHECK(result.k1 == 1.0);
    CHECK(result.k2 == 0.5);
    CHECK(result.k3 == 2.0);
}
