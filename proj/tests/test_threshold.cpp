#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "udw/threshold.hpp"

using namespace udw;

TEST_CASE("classification carries margins with error bars") {
    auto vac = ScenarioSpec::vacuum();

    auto on = classify(vac, {1.0, 120.0, 200.0});
    CHECK(on.verdict == Verdict::entangled);
    CHECK(on.margin_rel > 0.25);
    CHECK(on.error_rel < 1e-10);

    auto off = classify(vac, {1.0, 60.0, 200.0});
    CHECK(off.verdict == Verdict::separable);
    CHECK(off.margin_rel > 0.5);

    // bracket the tie point, then ask at quadrature accuracy: the margin falls
    // inside the (much wider) quadrature error bar and the verdict refuses
    double lo = 60.0, hi = 120.0;
    for (int i = 0; i < 40; ++i) {
        double mid = 0.5 * (lo + hi);
        auto o = observables(vac, {1.0, mid, 200.0});
        (compare_abs(o.X.abs(), o.A) > 0 ? hi : lo) = mid;
    }
    double tie = 0.5 * (lo + hi);
    auto near = try_classify(vac, {1.0, tie, 200.0}, Method::quadrature);
    CHECK(near.verdict == Verdict::indeterminate);
    CHECK(near.margin_rel < near.error_rel);
    CHECK_THROWS_AS(classify(vac, {1.0, tie, 200.0}, Method::quadrature),
                    IndeterminateError);
}

TEST_CASE("vacuum window has a single lower boundary") {
    auto w = critical_frequencies(ScenarioSpec::vacuum(), 1.0, 200.0);
    CHECK(!w.empty);
    CHECK(!w.closed_above);
    CHECK(std::isinf(w.upper));
    // onset sits at the gap where the response deficit matches the exchange
    // envelope, slightly below L / 2 sigma^2
    CHECK(w.lower > 99.0);
    CHECK(w.lower < 100.5);
}

TEST_CASE("thermal window closes and the separation is capped") {
    auto th = ScenarioSpec::thermal(1e-2 / (2.0 * pi));

    auto w = critical_frequencies(th, 1.0, 100.0);
    CHECK(!w.empty);
    CHECK(w.closed_above);
    CHECK(w.lower > 45.0);
    CHECK(w.lower < 60.0);
    CHECK(w.upper > 230.0);
    CHECK(w.upper < 295.0);

    // beyond the cap no gap works at all
    auto far = critical_frequencies(th, 1.0, 500.0);
    CHECK(far.empty);

    double cap = max_entangled_separation(th, 1.0);
    CHECK(cap > 173.0);
    CHECK(cap < 390.0);

    // the vacuum region is unbounded in separation
    QuadratureSpec spec;
    double vac_cap = max_entangled_separation(ScenarioSpec::vacuum(), 1.0, spec,
                                              50.0, 2000.0);
    CHECK(std::isinf(vac_cap));
}

TEST_CASE("expanding window nests inside the thermal window") {
    const double T = 1e-2 / (2.0 * pi);
    auto th = critical_frequencies(ScenarioSpec::thermal(T), 1.0, 100.0);
    auto ds = critical_frequencies(ScenarioSpec::de_sitter(T), 1.0, 100.0);

    CHECK(!ds.empty);
    CHECK(ds.closed_above);
    CHECK(ds.lower >= th.lower * (1.0 - 5e-4));
    CHECK(ds.upper < th.upper);
    CHECK(ds.upper > ds.lower);

    double ds_cap = max_entangled_separation(ScenarioSpec::de_sitter(T), 1.0);
    double th_cap = max_entangled_separation(ScenarioSpec::thermal(T), 1.0);
    CHECK(ds_cap < th_cap);
    CHECK(ds_cap > 50.0);
}

TEST_CASE("subset lattice smoke run is deterministic across thread counts") {
    const double T = 1e-3 / (2.0 * pi);
    auto r1 = subset_check(1.0, T, {}, 8, 8, 1);
    auto r3 = subset_check(1.0, T, {}, 8, 8, 3);

    CHECK(r1.checked == 64);
    CHECK(r1.violations == 0);
    CHECK(r1.subset_holds());

    CHECK(r3.checked == r1.checked);
    CHECK(r3.violations == r1.violations);
    CHECK(r3.witnesses == r1.witnesses);
    CHECK(r3.indeterminate == r1.indeterminate);
    CHECK(r3.witness_in_band == r1.witness_in_band);
    CHECK(r3.witness_L == r1.witness_L);
    CHECK(r3.witness_Omega == r1.witness_Omega);
}
