#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "udw/errors.hpp"

// Real and complex error-function relatives plus the hyperbolic kernel
// differences the detector integrals are built from.  Every function states
// its region split; regions overlap nowhere and the cross-region jump is
// covered by tests.

namespace udw {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double sqrt_pi = 1.77245385090551602730;
inline constexpr double inv_sqrt_pi = 0.56418958354775628695;

namespace detail {

// B_{2k} for k = 1..16 as exact rationals rounded once.  The defining
// recurrence sum_{j} C(n+1,j) B_j = 0 is numerically unstable, so it is used
// as a test, not as the constructor.
inline constexpr std::array<double, 17> bernoulli_even = {
    1.0,
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
};

}  // namespace detail

// B_{2k}, k <= 16.
inline double bernoulli2k(int k) {
    if (k < 0 || k > 16) throw DomainError("bernoulli2k: k outside table");
    return detail::bernoulli_even[static_cast<std::size_t>(k)];
}

// exp(x^2) erfc(x) for x >= 0.
// [0,8): product with std::erfc; x^2 <= 64 so exp() is exact to ~x^2*eps.
// [8,inf): asymptotic series 1/(x sqrt(pi)) * sum (-1)^k (2k-1)!!/(2x^2)^k,
//          truncated when a term drops below 1e-18 of the sum (terms shrink
//          monotonically until k ~ x^2, long past that point).
inline double erfcx(double x) {
    if (!(x >= 0.0)) throw DomainError("erfcx: requires x >= 0");
    if (x < 8.0) return std::exp(x * x) * std::erfc(x);
    double inv2x2 = 1.0 / (2.0 * x * x);
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 40; ++k) {
        term *= -(2 * k - 1) * inv2x2;
        sum += term;
        if (std::fabs(term) < 1e-18 * sum) break;
    }
    return sum / (x * sqrt_pi);
}

// 1/sqrt(pi) - x erfcx(x) for x >= 0.  Direct subtraction loses ~2 x^2 eps
// of relative accuracy, fatal once x is in the thousands (thermal image
// terms), so for x >= 8 the cancellation is done inside the asymptotic
// series instead: 1/sqrt(pi) * [1/(2x^2) - 3/(4x^4) + 15/(8x^6) - ...].
inline double erfcx_deficit(double x) {
    if (!(x >= 0.0)) throw DomainError("erfcx_deficit: requires x >= 0");
    if (x < 8.0) return inv_sqrt_pi - x * erfcx(x);
    double inv2x2 = 1.0 / (2.0 * x * x);
    double term = 1.0, sum = 0.0;
    for (int k = 1; k < 40; ++k) {
        term *= -(2 * k - 1) * inv2x2;
        sum -= term;  // -(-1)^k (2k-1)!!/(2x^2)^k
        if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
    }
    return inv_sqrt_pi * sum;
}

// Dawson's integral, odd in x.
// [0,1): Maclaurin sum (-1)^k 2^k x^{2k+1}/(2k+1)!!.
// [1,7): sampling series (h = 1/4): F(x) ~ (1/sqrt(pi)) sum_{n odd}
//        exp(-(x-nh)^2)/n, exact up to O(exp(-pi^2/(4h^2))) ~ 7e-18.
// [7,inf): asymptotic (1/2x) sum (2k-1)!!/(2x^2)^k.
inline double dawson(double x) {
    double ax = std::fabs(x), sign = x < 0.0 ? -1.0 : 1.0;
    if (ax < 1.0) {
        double term = ax, sum = ax, x2 = ax * ax;
        for (int k = 1; k < 60; ++k) {
            term *= -2.0 * x2 / (2 * k + 1);
            sum += term;
            if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
        }
        return sign * sum;
    }
    if (ax < 7.0) {
        constexpr double h = 0.25;
        // window |x - n h| <= 9.2 keeps every dropped term below exp(-84)
        int lo = static_cast<int>(std::ceil((ax - 9.2) / h));
        int hi = static_cast<int>(std::floor((ax + 9.2) / h));
        if (lo % 2 == 0) ++lo;
        double sum = 0.0;
        for (int n = lo; n <= hi; n += 2) {
            double d = ax - n * h;
            sum += std::exp(-d * d) / n;
        }
        return sign * sum * inv_sqrt_pi;
    }
    double inv2x2 = 1.0 / (2.0 * ax * ax);
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 40; ++k) {
        term *= (2 * k - 1) * inv2x2;
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sign * sum / (2.0 * ax);
}

// Imaginary error function; overflows to +-inf past x ~ 26.6.
inline double erfi(double x) {
    double ax = std::fabs(x), sign = x < 0.0 ? -1.0 : 1.0;
    if (ax <= 3.0) {
        double term = ax, sum = ax, x2 = ax * ax;
        for (int k = 1; k < 120; ++k) {
            term *= x2 / k;
            sum += term / (2 * k + 1);
            if (term / (2 * k + 1) < 1e-18 * sum) break;
        }
        return sign * 2.0 * inv_sqrt_pi * sum;
    }
    return sign * 2.0 * inv_sqrt_pi * std::exp(ax * ax) * dawson(ax);
}

namespace detail {

inline double weideman_L() {
    static const double L = std::sqrt(48.0 / std::sqrt(2.0));
    return L;
}

// Rational-approximation coefficients on the upper half plane, derived once
// from the trapezoid rule for the Hilbert-transform representation (M = 2N
// samples of exp(-t^2)(Lc^2+t^2) on the tan-mapped grid, then a real DFT).
inline const std::array<double, 48>& faddeeva_poly() {
    static const std::array<double, 48> table = [] {
        constexpr int N = 48, M = 2 * N;
        const long double pl = 3.14159265358979323846264338327950288L;
        const long double Lc = weideman_L();
        std::array<long double, 2 * M> f{};
        f[0] = 0.0L;
        for (int j = 1; j < 2 * M; ++j) {
            long double theta = (j - M) * pl / M;
            long double t = Lc * std::tan(theta / 2.0L);
            long double g = std::exp(-t * t);
            f[j] = g == 0.0L ? 0.0L : g * (Lc * Lc + t * t);
        }
        std::array<double, 48> out{};
        for (int m = 1; m <= N; ++m) {
            long double s = 0.0L;
            for (int j = 1; j < 2 * M; ++j) s += f[j] * std::cos(pl * j * m / M);
            out[m - 1] = static_cast<double>(((m & 1) ? -s : s) / (2 * M));
        }
        return out;
    }();
    return table;
}

}  // namespace detail

// w(z) = exp(-z^2) erfc(-iz) on Im z >= 0.
// Im z == 0: exact split w(x) = exp(-x^2) + 2i dawson(x)/sqrt(pi).
// |z| < 8:  48-term rational approximation (see faddeeva_poly).
// |z| >= 8: Laplace continued fraction, 20 levels; the exp(-z^2) piece it
//           cannot see is below 1e-26 relative there.
inline std::complex<double> faddeeva(std::complex<double> z) {
    if (z.imag() < 0.0) throw DomainError("faddeeva: lower half plane not supported");
    if (z.imag() == 0.0) {
        double x = z.real();
        return {std::exp(-x * x), 2.0 * inv_sqrt_pi * dawson(x)};
    }
    if (std::abs(z) < 8.0) {
        const double Lc = detail::weideman_L();
        const auto& a = detail::faddeeva_poly();
        std::complex<double> den = Lc - std::complex<double>(0.0, 1.0) * z;
        std::complex<double> Z = (Lc + std::complex<double>(0.0, 1.0) * z) / den;
        std::complex<double> p = a[47];
        for (int j = 46; j >= 0; --j) p = p * Z + a[j];
        return 2.0 * p / (den * den) + inv_sqrt_pi / den;
    }
    std::complex<double> r = 0.0;
    for (int n = 20; n >= 1; --n) r = (n / 2.0) / (z - r);
    return std::complex<double>(0.0, inv_sqrt_pi) / (z - r);
}

// coth and csch for complex arguments.  Poles sit at z = i k pi; within 0.5
// of one, evaluate the regular factor through the Laurent/Taylor series in
// w = z - i k pi, else use exp(-2z)-based forms that cannot overflow.
namespace detail {

inline std::complex<double> pole_shift(std::complex<double> z, int& k) {
    k = static_cast<int>(std::lround(z.imag() / pi));
    return z - std::complex<double>(0.0, k * pi);
}

// coth(w) - 1/w for |w| < 0.6: sum_{k>=1} 4^k B_{2k} w^{2k-1}/(2k)!
template <class C>
C cothm1_series(C w) {
    C w2 = w * w, sum = C{};
    double factor = 1.0;        // 4^k / (2k)!
    C wpow = w;                 // w^{2k-1}
    for (int k = 1; k <= 16; ++k) {
        factor *= 4.0 / ((2 * k) * (2 * k - 1));
        sum += factor * bernoulli2k(k) * wpow;
        wpow = wpow * w2;
    }
    return sum;
}

// csch^2(w) - 1/w^2 for |w| < 0.6: -sum_{k>=1} (2k-1) 4^k B_{2k} w^{2k-2}/(2k)!
template <class C>
C csch2m_series(C w) {
    C w2 = w * w, sum = C{};
    double factor = 1.0;
    C wpow = 1.0;
    for (int k = 1; k <= 16; ++k) {
        factor *= 4.0 / ((2 * k) * (2 * k - 1));
        sum -= (2 * k - 1) * factor * bernoulli2k(k) * wpow;
        wpow = wpow * w2;
    }
    return sum;
}

}  // namespace detail

inline std::complex<double> coth_c(std::complex<double> z) {
    int k;
    std::complex<double> w = detail::pole_shift(z, k);  // coth(z) = coth(w)
    double aw = std::abs(w);
    if (aw < 0.6) {
        if (aw < 1e-290) throw SingularityError("coth_c: on a pole", k, 0);
        return 1.0 / w + detail::cothm1_series(w);
    }
    if (std::fabs(w.real()) > 0.25 || std::fabs(z.real()) > 0.25) {
        std::complex<double> zz = z.real() < 0.0 ? -z : z;
        std::complex<double> e = std::exp(-2.0 * zz);
        std::complex<double> r = (1.0 + e) / (1.0 - e);
        return z.real() < 0.0 ? -r : r;
    }
    return std::cosh(z) / std::sinh(z);  // |Re z| small, |w| >= 0.6: sinh is safe
}

inline std::complex<double> csch_c(std::complex<double> z) {
    int k;
    std::complex<double> w = detail::pole_shift(z, k);  // csch(z) = (-1)^k csch(w)
    double sgn = (k % 2 == 0) ? 1.0 : -1.0;
    double aw = std::abs(w);
    if (aw < 0.6) {
        if (aw < 1e-290) throw SingularityError("csch_c: on a pole", k, 0);
        // csch(w) = 1/w - w/6 + 7w^3/360 - ... = 1/w + (cosh-1 terms); reuse
        // csch = 1/sinh with series sinh = w(1 + w^2/6 + w^4/120 + ...)
        std::complex<double> w2 = w * w;
        std::complex<double> s = 1.0, term = 1.0;
        for (int j = 1; j <= 12; ++j) {
            term *= w2 / double((2 * j) * (2 * j + 1));
            s += term;
        }
        return sgn / (w * s);
    }
    if (std::fabs(z.real()) > 0.25) {
        std::complex<double> zz = z.real() < 0.0 ? -z : z;
        std::complex<double> e = std::exp(-zz);
        std::complex<double> r = 2.0 * e / (1.0 - e * e);
        return z.real() < 0.0 ? -r : r;
    }
    return 1.0 / std::sinh(z);
}

// coth(x) - 1/x, real line.
inline double cothm1(double x) {
    if (x == 0.0) return 0.0;
    if (std::fabs(x) < 0.6) return detail::cothm1_series(x);
    if (std::fabs(x) > 20.0) {
        double ax = std::fabs(x);
        double e = std::exp(-2.0 * ax);
        double r = (1.0 + e) / (1.0 - e) - 1.0 / ax;
        return x < 0.0 ? -r : r;
    }
    return 1.0 / std::tanh(x) - 1.0 / x;
}

// csch^2(z) - 1/z^2.  Regular at 0; double poles remain at z = i k pi, k != 0,
// where the 1/w^2 head is restored explicitly.
inline std::complex<double> csch2m(std::complex<double> z) {
    int k;
    std::complex<double> w = detail::pole_shift(z, k);
    double aw = std::abs(w);
    if (aw < 0.6) {
        if (k == 0) return detail::csch2m_series(w);
        if (aw < 1e-290) throw SingularityError("csch2m: on a pole", k, 0);
        return 1.0 / (w * w) - 1.0 / (z * z) + detail::csch2m_series(w);
    }
    std::complex<double> c = csch_c(z);
    return c * c - 1.0 / (z * z);
}

inline double csch2m(double x) {
    if (x == 0.0) return -1.0 / 3.0;
    if (std::fabs(x) < 0.6) return detail::csch2m_series(x);
    if (std::fabs(x) > 20.0) {
        double e = std::exp(-std::fabs(x));
        double s = 2.0 * e / (1.0 - e * e);
        return s * s - 1.0 / (x * x);
    }
    double s = 1.0 / std::sinh(x);
    return s * s - 1.0 / (x * x);
}

// Hurwitz zeta(s, q) for integer s >= 2 and complex q with Re q > 0, by
// Euler-Maclaurin: push q out to |q + J| >= 16, then correct with B_{2r}
// terms (r <= 8, remainder < 1e-20 relative at that radius).
inline std::complex<double> hurwitz_zeta(int s, std::complex<double> q) {
    if (s < 2) throw DomainError("hurwitz_zeta: s >= 2 required");
    if (!(q.real() > 0.0)) throw DomainError("hurwitz_zeta: Re q > 0 required");
    int J = 0;
    if (q.real() < 16.0) J = static_cast<int>(std::ceil(16.0 - q.real()));
    std::complex<double> sum = 0.0;
    for (int k = 0; k < J; ++k) sum += std::pow(q + double(k), -s);
    std::complex<double> P = q + double(J);
    std::complex<double> invP = 1.0 / P;
    std::complex<double> Ppow = std::pow(P, -s);               // P^{-s}
    sum += Ppow * P / double(s - 1) + Ppow * 0.5;               // P^{1-s}/(s-1) + P^{-s}/2
    double poch = s;                                            // (s)(s+1)...(s+2r-2)
    std::complex<double> Pterm = Ppow * invP;                   // P^{-s-2r+1}, r=1
    double fact = 2.0;                                          // (2r)!
    for (int r = 1; r <= 8; ++r) {
        sum += bernoulli2k(r) / fact * poch * Pterm;
        poch *= (s + 2 * r - 1) * (s + 2 * r);
        fact *= (2 * r + 1) * (2 * r + 2);
        Pterm *= invP * invP;
    }
    return sum;
}

}  // namespace udw
