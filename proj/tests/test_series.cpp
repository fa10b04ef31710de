#include <catch2/catch_amalgamated.hpp>
#include <complex>

#include "udw/series.hpp"

using namespace udw;
using cplx = std::complex<double>;

static double rel(double got, double want) {
    return std::fabs(got - want) / std::fabs(want);
}
static double relc(cplx got, cplx want) {
    return std::abs(got - want) / std::abs(want);
}

TEST_CASE("bivariate product truncates and records the largest dropped term") {
    BivariateSeries a(1, 1), b(1, 1);
    a.at(0, 0) = 1.0;
    a.at(1, 0) = 2.0;
    a.at(0, 1) = 3.0;
    a.at(1, 1) = 4.0;
    b.at(0, 0) = 5.0;
    b.at(1, 0) = 7.0;
    BivariateSeries p = mul(a, b);
    CHECK(p.at(0, 0) == cplx(5.0));
    CHECK(p.at(1, 0) == cplx(17.0));   // 2*5 + 1*7
    CHECK(p.at(0, 1) == cplx(15.0));
    CHECK(p.at(1, 1) == cplx(41.0));   // 4*5 + 3*7
    // dropped: 2u*7u = 14 u^2 and 4uv*7u = 28 u^2 v
    CHECK(p.truncation_estimate() == Catch::Approx(28.0));

    BivariateSeries wrong(2, 1);
    CHECK_THROWS_AS(mul(a, wrong), DomainError);
    CHECK_THROWS_AS(BivariateSeries(-1, 2), DomainError);
}

TEST_CASE("reciprocal inverts every retained coefficient") {
    BivariateSeries F(4, 4);
    F.at(0, 0) = cplx(2.0, 0.0);
    F.at(1, 0) = cplx(0.1, 0.05);
    F.at(0, 2) = 0.3;
    F.at(2, 1) = cplx(-0.07, 0.02);
    BivariateSeries R = BivariateSeries::reciprocal(F);
    BivariateSeries P = mul(F, R);
    for (int m = 0; m <= 4; ++m)
        for (int n = 0; n <= 4; ++n) {
            cplx want = (m == 0 && n == 0) ? cplx(1.0) : cplx(0.0);
            CHECK(std::abs(P.at(m, n) - want) < 1e-13);
        }
    cplx u(0.2, 0.0), v(0.3, 0.0);
    CHECK(std::abs(R.evaluate(u, v) - 1.0 / F.evaluate(u, v)) < 1e-4);
    BivariateSeries Z(2, 2);
    CHECK_THROWS_AS(BivariateSeries::reciprocal(Z), DomainError);
}

TEST_CASE("response difference expansion matches the kernel") {
    const double T = 0.01;
    auto c = expand_delta_response(T, 8);
    REQUIRE(c.size() == 9);
    CHECK(rel(c[0], T * T / 12.0) < 1e-15);
    for (int n = 1; n < 9; n += 2) CHECK(c[static_cast<std::size_t>(n)] == 0.0);
    double v = 3.0, acc = 0.0, p = 1.0;
    for (double cn : c) {
        acc += cn * p;
        p *= v;
    }
    CHECK(rel(acc, delta_response_kernel(v, T)) < 1e-12);
}

TEST_CASE("thermal difference expansion: coefficients and constant-term identity") {
    const double L = 15.0, T = 0.01;
    auto d = expand_delta_thermal(L, T, 8);
    // Fixed reference values computed with extended-precision arithmetic.
    CHECK(rel(d[0], 8.2125157806235373e-6) < 1e-13);
    CHECK(rel(d[2], -1.5341776523979264e-9) < 1e-13);
    CHECK(rel(d[4], 2.2069127644052377e-13) < 1e-13);
    CHECK(rel(d[6], -2.7114937052490544e-17) < 1e-13);
    CHECK(rel(d[8], 2.9786609522884441e-21) < 1e-13);
    for (int n = 1; n < 9; n += 2) CHECK(d[static_cast<std::size_t>(n)] == 0.0);

    // constant of full thermal kernel = (T/4 pi L) coth(pi T L)
    double c0 = d[0] + 1.0 / (4.0 * pi * pi * L * L);
    CHECK(rel(c0, 0.00012079160871655439) < 1e-13);

    double v = 1.5, acc = 0.0, p = 1.0;
    for (double dn : d) {
        acc += dn * p;
        p *= v;
    }
    CHECK(rel(acc, delta_thermal_wightman(v, L, T)) < 1e-12);
}

TEST_CASE("exchange kernel expansion per scenario") {
    SECTION("vacuum: geometric coefficients") {
        const double L = 7.0;
        auto k = expand_exchange_kernel(ScenarioSpec::vacuum(), L, 8);
        REQUIRE(k.order_u() == 0);
        double want = 1.0 / (4.0 * pi * pi * L * L);
        for (int n = 0; n <= 8; n += 2) {
            CHECK(rel(k.at(0, n).real(), want) < 1e-15);
            CHECK(k.at(0, n).imag() == 0.0);
            want /= L * L;
        }
        CHECK(k.truncation_estimate() == 0.0);
    }
    SECTION("thermal: constant term and pointwise agreement") {
        const double L = 15.0, T = 0.01;
        auto k = expand_exchange_kernel(ScenarioSpec::thermal(T), L, 8);
        CHECK(rel(k.at(0, 0).real(), 0.00012079160871655439) < 1e-13);
        cplx got = k.evaluate(0.0, 1.5);
        cplx want = thermal_wightman(cplx(1.5, 0.0), L, T);
        CHECK(relc(got, want) < 1e-9);  // limited by (v/L)^10 truncation
    }
    SECTION("de Sitter: constant term, pointwise agreement, cold limit") {
        const double L = 15.0, T = 1e-2 / (2.0 * pi);
        auto k = expand_exchange_kernel(ScenarioSpec::de_sitter(T), L, 8);
        CHECK(rel(k.at(0, 0).real(), 1.0 / (4.0 * pi * pi * L * L)) < 1e-13);
        cplx got = k.evaluate(cplx(0.5, 0.0), cplx(0.8, 0.0));
        cplx want = desitter_wightman(cplx(0.5, 0.0), cplx(0.8, 0.0), L, T);
        CHECK(relc(got, want) < 1e-11);

        auto cold = expand_exchange_kernel(ScenarioSpec::de_sitter(1e-12), L, 8);
        auto vac = expand_exchange_kernel(ScenarioSpec::vacuum(), L, 8);
        for (int n = 0; n <= 8; n += 2)
            CHECK(relc(cold.at(0, n), vac.at(0, n)) < 1e-9);
    }
}

TEST_CASE("response series integral reproduces the thermal correction") {
    // Fixed reference values computed with extended-precision arithmetic.
    struct Row {
        double kappa_sigma, omega, want;
    };
    const Row rows[] = {
        {1e-2, 0.0, 1.3262779298363094e-6},
        {1e-2, 1.0, 4.8792014166167577e-7},
        {1e-3, 0.0, 1.3262910598033735e-8},
        {1e-3, 1.0, 4.8791531149416658e-9},
    };
    for (const auto& r : rows) {
        double T = r.kappa_sigma / (2.0 * pi);
        auto res = series_integrate_response(expand_delta_response(T, 8), 1.0, r.omega);
        cplx val = res.value.to_complex();
        CHECK(std::fabs(val.imag()) < 1e-18);
        CHECK(rel(val.real(), r.want) < std::max(1e-11, res.rel_error));
        CHECK(res.rel_error < 1e-8);
    }
}

TEST_CASE("exchange series integral: vacuum closed form") {
    const double sigma = 1.0, omega = 0.5;
    for (double L : {15.0, 20.0}) {
        auto k = expand_exchange_kernel(ScenarioSpec::vacuum(), L, 8);
        auto res = series_integrate_exchange(k, sigma, omega);
        double closed = -(sigma / (2.0 * pi * L)) * std::exp(-sigma * sigma * omega * omega) *
                        dawson(L / (2.0 * sigma));
        cplx val = res.value.to_complex();
        CHECK(val.imag() == 0.0);
        CHECK(rel(val.real(), closed) < 1e-6);          // tight: truncation is smaller here
        CHECK(rel(val.real(), closed) < 3.0 * res.rel_error);
        CHECK(res.rel_error < 1e-5);
    }
}

TEST_CASE("exchange series integral: thermal reference lattice") {
    // Fixed reference values computed with extended-precision arithmetic.
    struct Row {
        double kappa_sigma, L, omega, want;
    };
    const Row rows[] = {
        {1e-2, 15.0, 0.0, -0.000715144312444737},
        {1e-2, 15.0, 1.0, -0.000263086890019105},
        {1e-2, 50.0, 1.0, -2.3924603227833e-5},
        {1e-3, 15.0, 1.0, -0.000262604041630839},
    };
    for (const auto& r : rows) {
        double T = r.kappa_sigma / (2.0 * pi);
        auto k = expand_exchange_kernel(ScenarioSpec::thermal(T), r.L, 8);
        auto res = series_integrate_exchange(k, 1.0, r.omega);
        cplx val = res.value.to_complex();
        double tol = std::max(3.0 * res.rel_error, 1e-9);
        CHECK(rel(val.real(), r.want) < tol);
        CHECK(rel(val.real(), r.want) < 2e-6);
    }
}

TEST_CASE("exchange series integral: de Sitter reference lattice") {
    // Fixed reference values computed with extended-precision arithmetic.
    struct Row {
        double kappa_sigma, L, omega;
        cplx want;
    };
    const Row rows[] = {
        {1e-2, 15.0, 0.0, {-0.000713892295835141, 0.0}},
        {1e-2, 15.0, 1.0, {-0.000262572279167203, 5.30108420421393e-6}},
        {1e-3, 15.0, 1.0, {-0.000262598893689219, 5.30089373642519e-7}},
        {1e-2, 50.0, 1.0, {-2.34363649208706e-5, 4.69166554308572e-7}},
    };
    for (const auto& r : rows) {
        double T = r.kappa_sigma / (2.0 * pi);
        auto k = expand_exchange_kernel(ScenarioSpec::de_sitter(T), r.L, 8);
        auto res = series_integrate_exchange(k, 1.0, r.omega);
        cplx val = res.value.to_complex();
        double tol = std::max(3.0 * res.rel_error, 1e-6);
        CHECK(relc(val, r.want) < tol);
        CHECK(relc(val, r.want) < 2e-6);
    }
}

TEST_CASE("asymptotic breakdown raises instead of returning garbage") {
    auto k = expand_exchange_kernel(ScenarioSpec::vacuum(), 3.0, 8);
    CHECK_THROWS_AS(series_integrate_exchange(k, 1.0, 0.5), BreakdownError);
    CHECK_THROWS_AS(series_integrate_response(expand_delta_response(1.0, 8), 1.0, 0.0),
                    BreakdownError);
    try {
        series_integrate_exchange(k, 1.0, 0.5);
        FAIL("expected BreakdownError");
    } catch (const BreakdownError& e) {
        CHECK(e.last_term > 1e-3);
    }
}
