#include <doctest.h>

#include <cmath>
#include <set>

#include "casecost/synthetic.hpp"
#include "test_util.hpp"

using namespace casecost;

namespace {

bool same_record(const CaseRecord& a, const CaseRecord& b) {
    return a.case_id == b.case_id && a.cmg == b.cmg && a.pac_riw == b.pac_riw && a.riw == b.riw &&
           a.los_total == b.los_total && a.los_acute == b.los_acute && a.los_alc == b.los_alc &&
           a.sc_hours == b.sc_hours;
}

}  // namespace

TEST_CASE("generation is deterministic for a fixed seed") {
    SyntheticSpec spec;
    spec.n_cmgs = 8;
    spec.cases_per_cmg_min = 2;
    spec.cases_per_cmg_max = 20;
    spec.degenerate_pac_fraction = 0.25;
    spec.seed = 4242;

    const auto a = generate_synthetic(spec);
    const auto b = generate_synthetic(spec);
    REQUIRE(a.dataset.cases.size() == b.dataset.cases.size());
    for (std::size_t i = 0; i < a.dataset.cases.size(); ++i) {
        CHECK(same_record(a.dataset.cases[i], b.dataset.cases[i]));
    }
    CHECK(a.ground_truth == b.ground_truth);

    spec.seed = 4243;
    const auto c = generate_synthetic(spec);
    bool all_same = a.dataset.cases.size() == c.dataset.cases.size();
    for (std::size_t i = 0; all_same && i < a.dataset.cases.size(); ++i) {
        all_same = same_record(a.dataset.cases[i], c.dataset.cases[i]);
    }
    CHECK(!all_same);
}

TEST_CASE("a fully pac-degenerate single group shares one PAC weight with distinct RIWs") {
    SyntheticSpec spec;
    spec.n_cmgs = 1;
    spec.cases_per_cmg_min = 9;
    spec.cases_per_cmg_max = 9;
    spec.degenerate_pac_fraction = 1.0;
    spec.cost_process = CostProcess::ProportionalToRiw;
    spec.seed = 7;

    const auto data = generate_synthetic(spec);
    REQUIRE(data.dataset.cases.size() == 9);
    std::set<double> pac_values;
    std::set<double> riw_values;
    for (const auto& rec : data.dataset.cases) {
        pac_values.insert(rec.pac_riw);
        riw_values.insert(rec.riw);
    }
    CHECK(pac_values.size() == 1);
    CHECK(riw_values.size() == 9);
}

TEST_CASE("LOS-proportional costs have a constant cost-per-day within each CMG") {
    SyntheticSpec spec;
    spec.n_cmgs = 6;
    spec.cases_per_cmg_min = 3;
    spec.cases_per_cmg_max = 12;
    spec.cost_process = CostProcess::ProportionalToLos;
    spec.seed = 11;

    const auto data = generate_synthetic(spec);
    for (const auto& [cmg, indices] : data.dataset.groups) {
        double ratio = 0.0;
        for (std::size_t i : indices) {
            const auto& rec = data.dataset.cases[i];
            REQUIRE(rec.los_total > 0);
            const double r = data.ground_truth.at(rec.case_id) / rec.los_total;
            if (ratio == 0.0) {
                ratio = r;
            } else {
                CHECK(r == doctest::Approx(ratio).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("benchmark statistics equal a brute-force aggregation of the ground truth") {
    SyntheticSpec spec;
    spec.n_cmgs = 15;
    spec.cases_per_cmg_min = 1;
    spec.cases_per_cmg_max = 25;
    spec.cost_process = CostProcess::Mixed;
    spec.degenerate_pac_fraction = 0.2;
    spec.degenerate_both_fraction = 0.2;
    spec.seed = 123;

    const auto data = generate_synthetic(spec);
    for (const auto& [cmg, indices] : data.dataset.groups) {
        std::vector<double> costs;
        for (std::size_t i : indices) {
            costs.push_back(data.ground_truth.at(data.dataset.cases[i].case_id));
        }
        const auto expected = testutil::naive_stats(costs);
        const auto& actual = data.dataset.benchmark.at(cmg);
        CHECK(actual.case_count == expected.count);
        CHECK(actual.total == doctest::Approx(expected.total).epsilon(1e-9));
        CHECK(actual.average == doctest::Approx(expected.average).epsilon(1e-9));
        CHECK(actual.stdev == doctest::Approx(expected.stdev).epsilon(1e-9));
        CHECK(actual.min == doctest::Approx(expected.min).epsilon(1e-9));
        CHECK(actual.max == doctest::Approx(expected.max).epsilon(1e-9));
    }
}

TEST_CASE("requested degeneracy fractions are realized exactly") {
    SyntheticSpec spec;
    spec.n_cmgs = 20;
    spec.cases_per_cmg_min = 2;
    spec.cases_per_cmg_max = 10;
    spec.degenerate_pac_fraction = 0.25;
    spec.degenerate_both_fraction = 0.15;
    spec.seed = 5;

    const auto data = generate_synthetic(spec);
    int pac_only = 0;
    int both = 0;
    for (const auto& [cmg, indices] : data.dataset.groups) {
        std::set<double> pac;
        std::set<double> riw;
        for (std::size_t i : indices) {
            pac.insert(data.dataset.cases[i].pac_riw);
            riw.insert(data.dataset.cases[i].riw);
        }
        if (pac.size() == 1 && riw.size() > 1) {
            ++pac_only;
        }
        if (pac.size() == 1 && riw.size() == 1 && indices.size() >= 2) {
            ++both;
        }
    }
    CHECK(pac_only == 5);
    CHECK(both == 3);
}

TEST_CASE("infeasible specs are rejected") {
    SyntheticSpec spec;
    spec.n_cmgs = 0;
    CHECK_THROWS_AS(generate_synthetic(spec), std::invalid_argument);

    spec.n_cmgs = 10;
    spec.degenerate_pac_fraction = 0.7;
    spec.degenerate_both_fraction = 0.7;
    CHECK_THROWS_AS(generate_synthetic(spec), std::invalid_argument);

    spec.degenerate_both_fraction = 1.5;
    CHECK_THROWS_AS(generate_synthetic(spec), std::invalid_argument);

    spec = SyntheticSpec{};
    spec.cases_per_cmg_min = 5;
    spec.cases_per_cmg_max = 2;
    CHECK_THROWS_AS(generate_synthetic(spec), std::invalid_argument);

    spec = SyntheticSpec{};
    spec.stay_ratio_alc = 0.0;
    CHECK_THROWS_AS(generate_synthetic(spec), std::invalid_argument);
}

TEST_CASE("generated values satisfy the record invariants") {
    SyntheticSpec spec;
    spec.n_cmgs = 10;
    spec.cases_per_cmg_min = 1;
    spec.cases_per_cmg_max = 30;
    spec.seed = 77;
    const auto data = generate_synthetic(spec);
    for (const auto& rec : data.dataset.cases) {
        CHECK(validate_case(rec).empty());
        CHECK(data.ground_truth.at(rec.case_id) > 0.0);
    }
    CHECK(data.dataset.params.acute_expenses.has_value());
    CHECK(data.dataset.params.total_patient_days.has_value());
}
