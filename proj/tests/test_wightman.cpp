#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "udw/wightman.hpp"

using cplx = std::complex<double>;
namespace u = udw;

static double rel(cplx got, cplx want) { return std::abs(got - want) / std::abs(want); }

TEST_CASE("kernel anchor values") {
    // Fixed reference values computed with extended-precision arithmetic.
    REQUIRE(rel(u::vacuum_wightman(0.0, 1.0), 1.0 / (4 * u::pi * u::pi)) < 1e-15);
    REQUIRE(rel(u::vacuum_wightman(0.0, 2.0), 1.0 / (16 * u::pi * u::pi)) < 1e-15);
    REQUIRE(rel(u::response_kernel(50.0, 0.01), -4.72056463046832e-6) < 1e-13);
    REQUIRE(rel(u::thermal_wightman(0.0, 1000.0, 1.0 / (2000.0 * u::pi)),
                2.74067901533597e-8) < 1e-13);
    REQUIRE(rel(u::desitter_wightman(0.0, 0.0, 7.0, 0.003),
                1.0 / (4 * u::pi * u::pi * 49.0)) < 1e-14);
}

TEST_CASE("thermal kernel equals its long-double reconstruction") {
    double L = 3.0, T = 0.21;
    for (double v : {0.0, 0.4, 2.0, 2.9, 3.5, 12.0}) {
        long double a = 1.0L / std::tanh((long double)(u::pi) * T * (L - v));
        long double b = 1.0L / std::tanh((long double)(u::pi) * T * (L + v));
        long double want = T / (8.0L * oracle::pi_l * L) * (a + b);
        REQUIRE(rel(u::thermal_wightman(v, L, T), static_cast<double>(want)) < 1e-13);
    }
}

TEST_CASE("difference kernels are exact and regular") {
    double L = 5.0, T = 0.03;
    // identity D_thermal = D_vacuum + delta, checked off the cone
    for (double v : {0.0, 1.0, 4.2, 6.0, 30.0}) {
        cplx direct = u::thermal_wightman(v, L, T);
        cplx sum = u::vacuum_wightman(v, L) + u::delta_thermal_wightman(v, L, T);
        REQUIRE(std::abs(direct - sum) < 1e-15 * (std::abs(direct) + 1e-3));
    }
    // on the cone the difference stays finite while both parts blow up
    double on = u::delta_thermal_wightman(L, L, T);
    double want = T / (8 * u::pi * L) * u::cothm1(2 * u::pi * T * L);
    REQUIRE(on == Catch::Approx(want));
    REQUIRE_THROWS_AS(u::thermal_wightman(L, L, T), u::SingularityError);
    REQUIRE_THROWS_AS(u::vacuum_wightman(L, L), u::SingularityError);

    // response difference: value at zero is T^2/12
    REQUIRE(u::delta_response_kernel(0.0, T) == Catch::Approx(T * T / 12.0));
    for (double v : {0.5, 3.0, 100.0}) {
        cplx direct = u::response_kernel(v, T);
        cplx sum = u::response_kernel(v, 0.0) + u::delta_response_kernel(v, T);
        REQUIRE(std::abs(direct - sum) < 1e-15 * std::abs(direct) + 1e-18);
    }
}

TEST_CASE("kernels are even in v") {
    for (double v : {0.3, 1.7, 9.0}) {
        REQUIRE(u::vacuum_wightman(v, 2.0) == u::vacuum_wightman(-v, 2.0));
        REQUIRE(u::response_kernel(v, 0.1) == u::response_kernel(-v, 0.1));
        REQUIRE(rel(u::thermal_wightman(v, 2.0, 0.1), u::thermal_wightman(-v, 2.0, 0.1)) <
                1e-14);
        REQUIRE(rel(u::desitter_wightman(0.8, v, 2.0, 0.1),
                    u::desitter_wightman(0.8, -v, 2.0, 0.1)) < 1e-14);
    }
}

TEST_CASE("limit chain: thermal -> vacuum at rate T^2") {
    double v = 1.3, L = 4.0;
    double prev = 0.0;
    for (int d = 0; d < 3; ++d) {
        double T = 1e-2 * std::pow(10.0, -d);
        double diff = std::abs(u::thermal_wightman(v, L, T).real() -
                               u::vacuum_wightman(v, L).real());
        if (d > 0) {
            double slope = std::log10(prev / diff);  // decades per decade of T
            REQUIRE(slope == Catch::Approx(2.0).margin(0.05));
        }
        prev = diff;
    }
}

TEST_CASE("limit chain: expanding -> vacuum at rate T (u != 0)") {
    double unow = 2.0, v = 1.3, L = 4.0;
    double prev = 0.0;
    for (int d = 0; d < 3; ++d) {
        double T = 1e-3 * std::pow(10.0, -d);
        double diff =
            std::abs(u::desitter_wightman(unow, v, L, T).real() - u::vacuum_wightman(v, L).real());
        if (d > 0) REQUIRE(std::log10(prev / diff) == Catch::Approx(1.0).margin(0.05));
        prev = diff;
    }
}

TEST_CASE("limit chain: both finite-L kernels -> response kernel at rate L^2") {
    double v = 0.9, T = 0.05;
    double prev_th = 0.0, prev_ds = 0.0;
    for (int d = 0; d < 3; ++d) {
        double L = 1e-1 * std::pow(10.0, -d);
        double want = u::response_kernel(v, T).real();
        double dth = std::abs(u::thermal_wightman(v, L, T).real() - want);
        double dds = std::abs(u::desitter_wightman(0.0, v, L, T).real() - want);
        if (d > 0) {
            REQUIRE(std::log10(prev_th / dth) == Catch::Approx(2.0).margin(0.05));
            REQUIRE(std::log10(prev_ds / dds) == Catch::Approx(2.0).margin(0.05));
        }
        prev_th = dth;
        prev_ds = dds;
    }
}

TEST_CASE("expanding kernel at complex arguments matches long-double direct form") {
    double L = 15.0, T = 0.0015915494309189534;  // 2 pi T sigma = 1e-2
    for (cplx v : {cplx(3.0, -2.0), cplx(14.0, -1.5), cplx(25.0, -2.0)}) {
        for (cplx uu : {cplx(0.0, 0.0), cplx(-8.0, 2.0), cplx(11.0, 0.5)}) {
            std::complex<long double> vl(v.real(), v.imag()), ul(uu.real(), uu.imag());
            long double piT = oracle::pi_l * (long double)T;
            std::complex<long double> s = std::sinh(piT * vl);
            std::complex<long double> den =
                s * s / (piT * piT) - std::exp(2.0L * piT * ul) * ((long double)L * L);
            std::complex<long double> want = -1.0L / (4.0L * oracle::pi_l * oracle::pi_l) / den;
            REQUIRE(rel(u::desitter_wightman(uu, v, L, T),
                        cplx((double)want.real(), (double)want.imag())) < 1e-12);
        }
    }
}

TEST_CASE("scenario bookkeeping") {
    auto ds = u::ScenarioSpec::de_sitter(1e-3 / (2 * u::pi));
    REQUIRE(ds.kappa() == Catch::Approx(1e-3));
    REQUIRE(ds.horizon() == Catch::Approx(1000.0));
    REQUIRE(std::isinf(u::ScenarioSpec::vacuum().horizon()));
    REQUIRE_THROWS_AS(u::ScenarioSpec::thermal(0.0), u::DomainError);
    REQUIRE_THROWS_AS(u::ScenarioSpec::de_sitter(-1.0), u::DomainError);
}
