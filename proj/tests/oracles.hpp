#pragma once

// Reference implementations used only by tests.  Deliberately different
// algorithms from the library (continued fractions, ODE stepping, Taylor
// series, Romberg) evaluated in long double, so agreement is meaningful.

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

namespace oracle {

inline constexpr long double pi_l = 3.14159265358979323846264338327950288L;

// erfc via power series (small x) or Lentz continued fraction (large x).
inline long double erfc_ref(long double x) {
    if (x < 0.0L) return 2.0L - erfc_ref(-x);
    if (x < 1.0L) {
        // 1 - erf, erf from the alternating Maclaurin series
        long double term = 2.0L / std::sqrt(pi_l) * x, sum = term;
        for (int k = 1; k < 200; ++k) {
            term *= -x * x / k;
            long double add = term / (2 * k + 1);
            sum += add;
            if (std::fabs(add) < 1e-24L * std::fabs(sum)) break;
        }
        return 1.0L - sum;
    }
    // erfc(x) = exp(-x^2)/sqrt(pi) * K, K = 1/(x+ (1/2)/(x+ 1/(x+ (3/2)/(x+...))))
    long double b0 = x, f = b0, C = b0, D = 0.0L;
    const long double tiny = 1e-300L;
    for (int n = 1; n < 500; ++n) {
        long double a = n / 2.0L, b = x;
        D = b + a * D;
        if (D == 0.0L) D = tiny;
        C = b + a / C;
        if (C == 0.0L) C = tiny;
        D = 1.0L / D;
        long double delta = C * D;
        f *= delta;
        if (std::fabs(delta - 1.0L) < 1e-22L) break;
    }
    return std::exp(-x * x) / std::sqrt(pi_l) / f;
}

// Scaled complement exp(x^2) erfc(x) straight from the continued fraction,
// so no exp(x^2) is ever formed and any x >= 1 is fair game.
inline long double erfcx_ref(long double x) {
    if (x < 1.0L) return std::exp(x * x) * erfc_ref(x);
    long double b0 = x, f = b0, C = b0, D = 0.0L;
    const long double tiny = 1e-300L;
    for (int n = 1; n < 500; ++n) {
        long double a = n / 2.0L, b = x;
        D = b + a * D;
        if (D == 0.0L) D = tiny;
        C = b + a / C;
        if (C == 0.0L) C = tiny;
        D = 1.0L / D;
        long double delta = C * D;
        f *= delta;
        if (std::fabs(delta - 1.0L) < 1e-22L) break;
    }
    return 1.0L / (std::sqrt(pi_l) * f);
}

// Dawson's integral by RK4 on F' = 1 - 2 x F, F(0) = 0.
inline long double dawson_ref(long double x) {
    if (x < 0.0L) return -dawson_ref(-x);
    if (x == 0.0L) return 0.0L;
    const int n = 400000;
    const long double h = x / n;
    long double t = 0.0L, F = 0.0L;
    auto rhs = [](long double tt, long double FF) { return 1.0L - 2.0L * tt * FF; };
    for (int i = 0; i < n; ++i) {
        long double k1 = rhs(t, F);
        long double k2 = rhs(t + h / 2, F + h / 2 * k1);
        long double k3 = rhs(t + h / 2, F + h / 2 * k2);
        long double k4 = rhs(t + h, F + h * k3);
        F += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        t += h;
    }
    return F;
}

inline long double erfi_ref(long double x) {
    if (x < 0.0L) return -erfi_ref(-x);
    if (x <= 3.0L) {
        long double term = x, sum = x;  // sum of x^(2k+1)/(k! (2k+1))
        for (int k = 1; k < 300; ++k) {
            term *= x * x / k;
            sum += term / (2 * k + 1);
            if (term / (2 * k + 1) < 1e-24L * sum) break;
        }
        return 2.0L / std::sqrt(pi_l) * sum;
    }
    return 2.0L / std::sqrt(pi_l) * std::exp(x * x) * dawson_ref(x);
}

// w(z) = sum (iz)^n / Gamma(n/2+1); good to ~1e-15 for |z| <= 3.5.
inline std::complex<long double> faddeeva_ref(std::complex<long double> z) {
    if (std::abs(z) > 3.5L) throw std::domain_error("faddeeva_ref: |z| too large");
    std::complex<long double> iz(-z.imag(), z.real());
    std::complex<long double> power(1.0L, 0.0L), sum(0.0L, 0.0L);
    long double g_even = 1.0L;                       // Gamma(1), Gamma(2), ...
    long double g_odd = std::sqrt(pi_l) / 2.0L;      // Gamma(3/2), Gamma(5/2), ...
    for (int n = 0; n < 240; ++n) {
        long double g = (n % 2 == 0) ? g_even : g_odd;
        sum += power / g;
        if (n % 2 == 0)
            g_even *= n / 2.0L + 1.0L;
        else
            g_odd *= n / 2.0L + 1.0L;
        power *= iz;
        if (n > 8 && std::abs(power) / g < 1e-24L * std::abs(sum)) break;
    }
    return sum;
}

inline long double cothm1_ref(long double x) { return 1.0L / std::tanh(x) - 1.0L / x; }
inline long double csch2m_ref(long double x) {
    long double s = std::sinh(x);
    return 1.0L / (s * s) - 1.0L / (x * x);
}

// Romberg integration of a smooth real integrand on [a, b].
template <class F>
long double romberg(F f, long double a, long double b, long double tol = 1e-18L) {
    constexpr int kmax = 22;
    long double R[kmax][kmax];
    long double h = b - a;
    R[0][0] = h / 2 * (f(a) + f(b));
    for (int k = 1; k < kmax; ++k) {
        h /= 2;
        long double s = 0.0L;
        std::int64_t n = std::int64_t(1) << k;
        for (std::int64_t i = 1; i < n; i += 2) s += f(a + i * h);
        R[k][0] = R[k - 1][0] / 2 + h * s;
        long double p4 = 1.0L;
        for (int j = 1; j <= k; ++j) {
            p4 *= 4.0L;
            R[k][j] = R[k][j - 1] + (R[k][j - 1] - R[k - 1][j - 1]) / (p4 - 1.0L);
        }
        if (k > 4 && std::fabs(R[k][k] - R[k - 1][k - 1]) <
                         tol * (std::fabs(R[k][k]) + 1e-300L))
            return R[k][k];
    }
    return R[kmax - 1][kmax - 1];
}

}  // namespace oracle
