#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "udw/errors.hpp"
#include "udw/quadrature.hpp"
#include "udw/scaled.hpp"
#include "udw/series.hpp"
#include "udw/special_functions.hpp"
#include "udw/wightman.hpp"

// Excitation probability A (per detector) and exchange amplitude X for a pair
// of Gaussian-switched two-level detectors at comoving separation L.  Every
// observable is available through at least two independent instruments so the
// fast path can always be checked against a slow one.

namespace udw {

struct DetectorParams {
    double sigma = 1.0;  // switching width
    double Omega = 0.0;  // energy gap, >= 0
    double L = 0.0;      // separation, > 0 where an exchange amplitude is requested

    void validate(bool need_separation) const {
        if (!(sigma > 0.0)) throw DomainError("DetectorParams: sigma must be positive");
        if (!(Omega >= 0.0)) throw DomainError("DetectorParams: Omega must be non-negative");
        if (need_separation && !(L > 0.0))
            throw DomainError("DetectorParams: L must be positive");
    }
};

enum class Method { closed_form, series, quadrature, image_sum, auto_tier };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::closed_form: return "closed_form";
        case Method::series: return "series";
        case Method::quadrature: return "quadrature";
        case Method::image_sum: return "image_sum";
        case Method::auto_tier: return "auto";
    }
    return "?";
}

struct AResult {
    ScaledComplex value;
    double rel_error = 0.0;
    Method method = Method::closed_form;
};
struct XResult {
    ScaledComplex value;  // principal-value convention at the light-cone pole
    double rel_error = 0.0;
    Method method = Method::closed_form;
};

// ---------------------------------------------------------------------------
// closed forms (vacuum)

inline ScaledComplex vacuum_A_closed(double sigma, double Omega) {
    const double x = sigma * Omega;
    return ScaledComplex::exp_of(-x * x) * ScaledComplex(erfcx_deficit(x) / (4.0 * sqrt_pi));
}

// PV part of the exchange amplitude; the light-cone residue is pure imaginary
// and smaller by exp(-L^2/4 sigma^2), reported by vacuum_X_lightcone_imag.
inline ScaledComplex vacuum_X_closed(double sigma, double Omega, double L) {
    const double x = sigma * Omega;
    return ScaledComplex::exp_of(-x * x) *
           ScaledComplex(-sigma * dawson(L / (2.0 * sigma)) / (2.0 * pi * L));
}

inline ScaledComplex vacuum_X_lightcone_imag(double sigma, double Omega, double L) {
    const double x = sigma * Omega;
    const double a = L / (2.0 * sigma);
    return ScaledComplex::exp_of(-x * x - a * a) *
           ScaledComplex(sigma * sqrt_pi / (4.0 * pi * L));
}

namespace detail {

// ---------------------------------------------------------------------------
// response probability instruments

// Vacuum response by quadrature.  Small gaps: one integration by parts leaves
// two smooth real integrals.  Larger gaps: drop the contour to the Gaussian
// saddle at -2 i sigma^2 Omega (the double pole sits above the axis, so the
// shift is unobstructed) where nothing oscillates.
inline ScaledComplex response_quad_vacuum(double sigma, double Omega,
                                          const QuadratureSpec& spec, double* rel_err) {
    const double x = sigma * Omega;
    const double W = 2.0 * sigma * spec.window_cut;
    if (x < 0.25) {
        auto c1 = adaptive_gk15(
            [&](double v) {
                return std::complex<double>(std::exp(-v * v / (4.0 * sigma * sigma)) *
                                            std::cos(Omega * v));
            },
            0.0, W, spec.rel_tol_1d, spec.max_panels);
        auto c2 = adaptive_gk15(
            [&](double v) {
                double s = v == 0.0 ? Omega : std::sin(Omega * v) / v;
                return std::complex<double>(std::exp(-v * v / (4.0 * sigma * sigma)) * s);
            },
            0.0, W, spec.rel_tol_1d, spec.max_panels);
        double I1 = 2.0 * c1.value.real(), I2 = 2.0 * c2.value.real();
        double pref = sigma * sqrt_pi / (4.0 * pi * pi);
        double A = pref * (I1 / (2.0 * sigma * sigma) + Omega * I2 - pi * Omega);
        double abs_err =
            pref * (c1.error / (sigma * sigma) + 2.0 * Omega * c2.error) + 1e-18;
        *rel_err = abs_err / std::max(std::fabs(A), 1e-300) + spec.rel_tol_1d;
        return ScaledComplex(A);
    }
    const double shift = 2.0 * sigma * sigma * Omega;
    auto q = adaptive_gk15(
        [&](double s) {
            std::complex<double> den(s, -shift);
            return std::exp(-s * s / (4.0 * sigma * sigma)) / (den * den);
        },
        -W, W, spec.rel_tol_1d, spec.max_panels);
    double core = -q.value.real() / (4.0 * pi * pi);
    *rel_err = q.error / std::max(std::abs(q.value), 1e-300) + spec.rel_tol_1d;
    return ScaledComplex::exp_of(-x * x) * ScaledComplex(sigma * sqrt_pi * core);
}

// Thermal (= conformal de Sitter) response correction by quadrature.  The
// difference kernel is regular on the whole axis; for larger gaps the contour
// drops to the saddle, guarded against the first image pole at -i/T.
inline ScaledComplex response_correction_quad(double sigma, double Omega, double T,
                                              const QuadratureSpec& spec, double* rel_err) {
    const double x = sigma * Omega;
    const double W = 2.0 * sigma * spec.window_cut;
    if (x < 2.5) {
        auto q = adaptive_gk15(
            [&](double v) {
                return std::complex<double>(std::exp(-v * v / (4.0 * sigma * sigma)) *
                                            std::cos(Omega * v) *
                                            delta_response_kernel(v, T));
            },
            0.0, W, spec.rel_tol_1d, spec.max_panels);
        double dA = 2.0 * sigma * sqrt_pi * q.value.real();
        *rel_err = q.error / std::max(std::abs(q.value), 1e-300) + spec.rel_tol_1d;
        return ScaledComplex(dA);
    }
    const double shift = 2.0 * sigma * sigma * Omega;
    if (shift >= 0.8 / T)
        throw PoleCrossingError(
            "response correction: saddle contour would approach the first thermal image");
    auto q = adaptive_gk15(
        [&](double s) {
            std::complex<double> v(s, -shift);
            return std::exp(-s * s / (4.0 * sigma * sigma)) * delta_response_kernel(v, T);
        },
        -W, W, spec.rel_tol_1d, spec.max_panels);
    *rel_err = q.error / std::max(std::abs(q.value), 1e-300) + spec.rel_tol_1d;
    return ScaledComplex::exp_of(-x * x) * ScaledComplex(sigma * sqrt_pi * q.value.real());
}

// Response correction as a sum over thermal images.  Image n contributes
// (e^{-x^2}/4 sqrt(pi)) [f(mu n + x) + f(mu n - x)] with f the erfcx deficit
// and mu = 1/(2 sigma T); a negative argument grows the Boltzmann-type term
// 2|b| e^{b^2}, carried in the ScaledComplex exponent.  The n > N remainder
// of both chains is resummed with Hurwitz zeta values.
inline ScaledComplex response_correction_images(double sigma, double Omega, double T,
                                                double* rel_err) {
    const double mu = 1.0 / (2.0 * sigma * T);
    const double x = sigma * Omega;
    const int N = std::max(16, static_cast<int>(std::ceil((8.0 + x) / mu)));

    ScaledComplex sum;
    for (int n = 1; n <= N; ++n) {
        double a = mu * n + x;
        double b = mu * n - x;
        ScaledComplex term(erfcx_deficit(a));
        if (b >= 0.0) {
            term += ScaledComplex(erfcx_deficit(b));
        } else {
            term += ScaledComplex(erfcx_deficit(-b));
            term += ScaledComplex(-2.0 * b) * ScaledComplex::exp_of(b * b);
        }
        sum += term;
    }

    static const double cs[4] = {0.5, -0.75, 1.875, -6.5625};
    const double alpha = x / mu;
    double mu_pow = mu * mu;
    double t_prev = 0.0, t_last = 0.0;
    double tail = 0.0;
    for (int i = 0; i < 4; ++i) {
        int s = 2 * i + 2;
        double za = hurwitz_zeta(s, {double(N + 1) + alpha, 0.0}).real();
        double zb = hurwitz_zeta(s, {double(N + 1) - alpha, 0.0}).real();
        double t = inv_sqrt_pi * cs[i] * (za + zb) / mu_pow;
        tail += t;
        t_prev = t_last;
        t_last = t;
        mu_pow *= mu * mu;
    }
    sum += ScaledComplex(tail);

    double err_abs = std::fabs(t_last);
    if (t_prev != 0.0) err_abs *= std::min(1.0, std::fabs(t_last / t_prev));
    *rel_err = err_abs * std::exp(-sum.log_abs()) + 1e-14;
    return ScaledComplex::exp_of(-x * x) * sum * ScaledComplex(1.0 / (4.0 * sqrt_pi));
}

// The truncated Taylor route cannot see absorption from the bath (terms like
// e^{-Omega/T}); refuse once the gap reaches the Matsubara scale.
inline void check_series_gap(double sigma, double Omega, double T) {
    const double mu = 1.0 / (2.0 * sigma * T);
    const double x = sigma * Omega;
    if (x > 0.7 * mu)
        throw BreakdownError("response series: gap beyond the Matsubara scale", x / mu,
                             {0.0, 0.0});
}

// ---------------------------------------------------------------------------
// exchange amplitude instruments

// Vacuum exchange by quadrature: subtract the Gaussian at the pole to leave a
// smooth integrand, then add the principal value of the subtraction back in
// closed form.  The log term is the analytic remainder of the PV integral
// over [0, C]; dropping it biases the result at the e^{-L^2/4 sigma^2} level
// times log, which is visible at small L.
inline ScaledComplex exchange_quad_vacuum(double sigma, double Omega, double L,
                                          const QuadratureSpec& spec, double* rel_err) {
    const double x = sigma * Omega;
    const double s2 = sigma * sigma;
    const double C = std::max(2.0 * sigma * spec.window_cut, 1.25 * L + 4.0 * sigma);
    const double gL = std::exp(-L * L / (4.0 * s2));
    auto q = adaptive_gk15(
        [&](double v) {
            double w = (L * L - v * v) / (4.0 * s2);
            double val;
            if (gL == 0.0) {
                // the pole carries no weight once the Gaussian has underflowed
                val = std::fabs(v - L) < 1e-8 * L ? 0.0
                                                  : std::exp(-v * v / (4.0 * s2)) /
                                                        (v * v - L * L);
            } else if (std::fabs(w) < 1e-8) {
                val = -gL / (4.0 * s2) * (1.0 + 0.5 * w);
            } else {
                val = -gL * std::expm1(w) / (4.0 * s2 * w);
            }
            return std::complex<double>(val);
        },
        0.0, C, spec.rel_tol_1d, spec.max_panels);
    double I = q.value.real();
    if (gL > 0.0) I += gL * std::log((C - L) / (C + L)) / (2.0 * L);
    // X = -2 sigma sqrt(pi) e^{-x^2} * (-1/4 pi^2) * I
    double coeff = sigma * sqrt_pi / (2.0 * pi * pi);
    *rel_err = q.error / std::max(std::fabs(I), 1e-300) + spec.rel_tol_1d;
    return ScaledComplex::exp_of(-x * x) * ScaledComplex(coeff * I);
}

// Thermal exchange: closed vacuum part plus the regular difference kernel
// integrated over the Gaussian window (no pole anywhere on the axis).
inline ScaledComplex exchange_quad_thermal(double sigma, double Omega, double L, double T,
                                           const QuadratureSpec& spec, double* rel_err) {
    const double x = sigma * Omega;
    const double cut = 2.0 * sigma * spec.window_cut;
    auto q = adaptive_gk15(
        [&](double v) {
            return std::complex<double>(std::exp(-v * v / (4.0 * sigma * sigma)) *
                                        delta_thermal_wightman(v, L, T));
        },
        0.0, cut, spec.rel_tol_1d, spec.max_panels);
    ScaledComplex corr =
        ScaledComplex::exp_of(-x * x) * ScaledComplex(-2.0 * sigma * sqrt_pi * q.value.real());
    ScaledComplex X = vacuum_X_closed(sigma, Omega, L) + corr;
    double denom = std::exp(X.log_abs() + x * x);  // |X| with the Gaussian factor removed
    *rel_err = 2.0 * sigma * sqrt_pi * q.error / std::max(denom, 1e-300) + spec.rel_tol_1d;
    return X;
}

// Thermal exchange as an image sum: vacuum part in closed form, image n
// contributing -(sigma e^{-x^2}/2 sqrt(pi) L) Im w((L + i n/T)/2 sigma).  The
// n > N remainder uses the large-|z| form of w and Hurwitz zeta resummation;
// the n^{-2} piece has an exact closed form.
inline ScaledComplex exchange_images_thermal(double sigma, double Omega, double L, double T,
                                             double* rel_err) {
    const double x = sigma * Omega;
    const double alpha = L / (2.0 * sigma);
    const double beta = 1.0 / (2.0 * sigma * T);
    const int N = 16;

    double imsum = 0.0;
    for (int n = 1; n <= N; ++n)
        imsum += faddeeva(std::complex<double>(alpha, beta * n)).imag();

    const double c = alpha / beta;  // = L T
    // sum_n 1/(n^2 + c^2) = (pi c coth(pi c) - 1) / 2 c^2; the -1 is exactly
    // the pole part of coth, so the pole-subtracted form has no cancellation
    double m1_full = pi * cothm1(pi * c) / (2.0 * c);
    double m1 = m1_full * alpha / (beta * beta);
    for (int n = 1; n <= N; ++n) m1 -= alpha / (alpha * alpha + beta * beta * n * n);

    const std::complex<double> ib(0.0, beta);
    const std::complex<double> q(double(N + 1), -c);
    const std::complex<double> ib3 = ib * ib * ib;
    const std::complex<double> ib5 = ib3 * ib * ib;
    double m3 = 0.5 * (hurwitz_zeta(3, q) / ib3).real();
    double m5 = 0.75 * (hurwitz_zeta(5, q) / ib5).real();
    double m7 = 1.875 * (hurwitz_zeta(7, q) / (ib5 * ib * ib)).real();
    double tail = inv_sqrt_pi * (m1 + m3 + m5);
    imsum += tail;

    *rel_err = inv_sqrt_pi * std::fabs(m7) / std::max(std::fabs(imsum), 1e-300) + 1e-13;
    ScaledComplex corr = ScaledComplex::exp_of(-x * x) *
                         ScaledComplex(-sigma * imsum / (2.0 * sqrt_pi * L));
    return vacuum_X_closed(sigma, Omega, L) + corr;
}

// Exchange in the expanding case by 2d quadrature on a shifted contour: the
// ordered-time variable drops to the Gaussian saddle (u = s + 2 i sigma^2
// Omega), which multiplies the stretched cone by a unit phase e^{i phi}.  A
// certificate keeps the cone pole away from the real interval window: inside
// |s| <= W the stretch factor stays within e^{+-2 pi T W} and the interval
// term cannot reach L^2 cos(phi) when (cut sinhc / L)^2 e^{2 pi T W} < 1.
inline ScaledComplex exchange_quad_desitter(double sigma, double Omega, double L, double T,
                                            const QuadratureSpec& spec, double* rel_err) {
    const double x = sigma * Omega;
    const double s2 = sigma * sigma;
    const double cut = 2.0 * sigma * spec.window_cut;
    const double W = cut;
    if (L < 1.2 * cut)
        throw GuardError("expanding exchange quadrature: needs L >= 1.2 * window");
    const double ptc = pi * T * cut;
    const double shc = ptc < 1e-8 ? 1.0 : std::sinh(ptc) / ptc;
    const double grow = std::exp(2.0 * pi * T * W);
    const double cstar = (cut * shc / L) * (cut * shc / L) * grow;
    if (cstar >= 1.0)
        throw PoleCrossingError("expanding exchange quadrature: window too hot, "
                                "cone pole can enter the contour strip");
    const double phi = 4.0 * pi * s2 * Omega * T;
    double lb = std::fabs(std::sin(phi));
    if (std::cos(phi) > cstar) lb = std::max(lb, std::cos(phi) - cstar);
    if (std::cos(phi) < 0.0) lb = std::max(lb, -std::cos(phi));
    if (lb / grow < 0.05)
        throw PoleCrossingError("expanding exchange quadrature: pole-distance "
                                "certificate failed");

    const std::complex<double> ushift(0.0, 2.0 * s2 * Omega);
    double inner_err_max = 0.0;
    auto outer = adaptive_gk15(
        [&](double s) {
            std::complex<double> u = ushift + s;
            auto inner = adaptive_gk15(
                [&](double v) {
                    return std::exp(-v * v / (4.0 * s2)) *
                           desitter_wightman(u, {v, 0.0}, L, T);
                },
                0.0, cut, spec.rel_tol_2d, spec.max_panels);
            double r = inner.error / std::max(std::abs(inner.value), 1e-300);
            inner_err_max = std::max(inner_err_max, r);
            return std::exp(-s * s / (4.0 * s2)) * inner.value;
        },
        -W, W, spec.rel_tol_2d, spec.max_panels);
    *rel_err = outer.error / std::max(std::abs(outer.value), 1e-300) + inner_err_max +
               spec.rel_tol_2d;
    return ScaledComplex::exp_of(-x * x) * ScaledComplex(-outer.value);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// dispatch

inline AResult response_probability(const ScenarioSpec& sc, double sigma, double Omega,
                                    Method m = Method::auto_tier,
                                    const QuadratureSpec& spec = {}) {
    spec.validate();
    DetectorParams{sigma, Omega, 1.0}.validate(false);

    if (sc.kind == ScenarioSpec::Kind::vacuum) {
        AResult r;
        switch (m) {
            case Method::auto_tier:
            case Method::closed_form:
                r.value = vacuum_A_closed(sigma, Omega);
                r.rel_error = 5e-16;
                r.method = Method::closed_form;
                return r;
            case Method::quadrature:
                r.value = detail::response_quad_vacuum(sigma, Omega, spec, &r.rel_error);
                r.method = Method::quadrature;
                return r;
            default:
                throw GuardError("vacuum response: only closed_form or quadrature");
        }
    }

    // thermal bath and the expanding conformal vacuum share the same response
    const double T = sc.T;
    ScaledComplex base = vacuum_A_closed(sigma, Omega);
    ScaledComplex dA;
    double rel_d = 0.0;
    AResult r;

    auto by_series = [&](int order) {
        detail::check_series_gap(sigma, Omega, T);
        auto res = series_integrate_response(expand_delta_response(T, order), sigma, Omega);
        dA = res.value;
        rel_d = res.rel_error + 1e-14;
        r.method = Method::series;
    };

    switch (m) {
        case Method::closed_form:
            throw GuardError("response correction has no closed form; use series, "
                             "quadrature or image_sum");
        case Method::series:
            by_series(spec.series_order);
            break;
        case Method::quadrature:
            dA = detail::response_correction_quad(sigma, Omega, T, spec, &rel_d);
            r.method = Method::quadrature;
            break;
        case Method::image_sum:
            dA = detail::response_correction_images(sigma, Omega, T, &rel_d);
            r.method = Method::image_sum;
            break;
        case Method::auto_tier:
            try {
                by_series(spec.series_order);
            } catch (const BreakdownError&) {
                try {
                    by_series(2 * spec.series_order);
                } catch (const BreakdownError&) {
                    dA = detail::response_correction_images(sigma, Omega, T, &rel_d);
                    r.method = Method::image_sum;
                }
            }
            break;
    }

    r.value = base + dA;
    double weight = dA.is_zero() ? 0.0 : std::exp(dA.log_abs() - r.value.log_abs());
    r.rel_error = rel_d * weight + 2e-15;
    return r;
}

inline XResult exchange_amplitude(const ScenarioSpec& sc, double sigma, double Omega,
                                  double L, Method m = Method::auto_tier,
                                  const QuadratureSpec& spec = {}) {
    spec.validate();
    DetectorParams{sigma, Omega, L}.validate(true);
    XResult r;

    auto by_series = [&](int order) {
        auto k = expand_exchange_kernel(sc, L, order);
        auto res = series_integrate_exchange(k, sigma, Omega);
        r.value = res.value;
        r.rel_error = res.rel_error + 1e-14;
        r.method = Method::series;
    };

    switch (sc.kind) {
        case ScenarioSpec::Kind::vacuum:
            switch (m) {
                case Method::auto_tier:
                case Method::closed_form:
                    r.value = vacuum_X_closed(sigma, Omega, L);
                    r.rel_error = 5e-16;
                    r.method = Method::closed_form;
                    return r;
                case Method::quadrature:
                    r.value = detail::exchange_quad_vacuum(sigma, Omega, L, spec,
                                                           &r.rel_error);
                    r.method = Method::quadrature;
                    return r;
                case Method::series:
                    by_series(spec.series_order);
                    return r;
                default:
                    throw GuardError("vacuum exchange: no image sum exists");
            }
        case ScenarioSpec::Kind::thermal:
            switch (m) {
                case Method::closed_form:
                    throw GuardError("thermal exchange has no closed form");
                case Method::series:
                    by_series(spec.series_order);
                    return r;
                case Method::quadrature:
                    r.value = detail::exchange_quad_thermal(sigma, Omega, L, sc.T, spec,
                                                            &r.rel_error);
                    r.method = Method::quadrature;
                    return r;
                case Method::image_sum:
                    r.value = detail::exchange_images_thermal(sigma, Omega, L, sc.T,
                                                              &r.rel_error);
                    r.method = Method::image_sum;
                    return r;
                case Method::auto_tier:
                    try {
                        by_series(spec.series_order);
                    } catch (const BreakdownError&) {
                        try {
                            by_series(2 * spec.series_order);
                        } catch (const BreakdownError&) {
                            r.value = detail::exchange_images_thermal(sigma, Omega, L, sc.T,
                                                                      &r.rel_error);
                            r.method = Method::image_sum;
                        }
                    }
                    return r;
            }
            break;
        case ScenarioSpec::Kind::de_sitter:
            switch (m) {
                case Method::closed_form:
                    throw GuardError("expanding exchange has no closed form");
                case Method::image_sum:
                    throw GuardError("expanding exchange has no image sum");
                case Method::series:
                    by_series(spec.series_order);
                    return r;
                case Method::quadrature:
                    r.value = detail::exchange_quad_desitter(sigma, Omega, L, sc.T, spec,
                                                             &r.rel_error);
                    r.method = Method::quadrature;
                    return r;
                case Method::auto_tier:
                    try {
                        by_series(spec.series_order);
                    } catch (const BreakdownError&) {
                        try {
                            by_series(2 * spec.series_order);
                        } catch (const BreakdownError&) {
                            r.value = detail::exchange_quad_desitter(sigma, Omega, L, sc.T,
                                                                     spec, &r.rel_error);
                            r.method = Method::quadrature;
                        }
                    }
                    return r;
            }
            break;
    }
    throw DomainError("exchange_amplitude: unknown scenario");
}

struct ObservableResult {
    ScaledComplex A, X;
    double A_rel_error = 0.0, X_rel_error = 0.0;
    Method a_method = Method::closed_form, x_method = Method::closed_form;

    bool entangled() const { return compare_abs(X.abs(), A) > 0; }
    ScaledComplex negativity() const {
        ScaledComplex ax = X.abs();
        return compare_abs(ax, A) > 0 ? ax - A : ScaledComplex(0.0);
    }
};

// Both observables at one parameter point.  The automatic tier is resolved
// jointly: if either observable falls off the series route, both downgrade to
// the exact instruments, so classification margins always compare values of
// matched provenance.
inline ObservableResult observables(const ScenarioSpec& sc, const DetectorParams& p,
                                    Method m = Method::auto_tier,
                                    const QuadratureSpec& spec = {}) {
    p.validate(true);
    ObservableResult out;
    auto fill = [&](Method ma, Method mx, const QuadratureSpec& qs) {
        auto a = response_probability(sc, p.sigma, p.Omega, ma, qs);
        auto xx = exchange_amplitude(sc, p.sigma, p.Omega, p.L, mx, qs);
        out.A = a.value;
        out.A_rel_error = a.rel_error;
        out.a_method = a.method;
        out.X = xx.value;
        out.X_rel_error = xx.rel_error;
        out.x_method = xx.method;
    };

    if (sc.kind == ScenarioSpec::Kind::vacuum) {
        Method mm = m == Method::auto_tier ? Method::closed_form : m;
        fill(mm, mm, spec);
        return out;
    }
    if (m != Method::auto_tier) {
        fill(m, m, spec);
        return out;
    }
    for (int order : {spec.series_order, 2 * spec.series_order}) {
        try {
            QuadratureSpec bumped = spec;
            bumped.series_order = order;
            fill(Method::series, Method::series, bumped);
            return out;
        } catch (const BreakdownError&) {
        }
    }
    if (sc.kind == ScenarioSpec::Kind::thermal)
        fill(Method::image_sum, Method::image_sum, spec);
    else
        fill(Method::image_sum, Method::quadrature, spec);
    return out;
}

// ---------------------------------------------------------------------------
// validation instrument: evaluate the exchange integral with the pole pushed
// off the axis by a finite i*eps, then extrapolate the ladder eps -> 0.  Slow
// and limited to moderate magnitudes; exists to check the production
// instruments over an entirely different route (including the light-cone
// residue, which the PV convention books separately).
inline std::complex<double> exchange_epsilon_reference(const ScenarioSpec& sc, double sigma,
                                                       double Omega, double L,
                                                       const QuadratureSpec& spec = {},
                                                       double* err_out = nullptr) {
    spec.validate();
    DetectorParams{sigma, Omega, L}.validate(true);
    const double x = sigma * Omega;
    const double s2 = sigma * sigma;
    const double cut = 2.0 * sigma * spec.window_cut;

    std::vector<double> eps;
    std::vector<std::complex<double>> vals;
    for (int k = spec.eps_k_lo; k <= spec.eps_k_hi; ++k) {
        double e = sigma * std::pow(2.0, -k);
        std::complex<double> I;
        if (sc.kind == ScenarioSpec::Kind::de_sitter) {
            auto outer = adaptive_gk15(
                [&](double u) {
                    auto inner = adaptive_gk15(
                        [&](double v) {
                            return std::exp(-v * v / (4.0 * s2)) *
                                   desitter_wightman({u, 0.0}, {v, -e}, L, sc.T);
                        },
                        0.0, cut, spec.rel_tol_2d, spec.max_panels);
                    return std::exp(-u * u / (4.0 * s2)) *
                           std::exp(std::complex<double>(0.0, Omega * u)) * inner.value;
                },
                -cut, cut, spec.rel_tol_2d, spec.max_panels);
            I = -outer.value;
        } else {
            auto q = adaptive_gk15(
                [&](double v) {
                    std::complex<double> vc(v, -e);
                    std::complex<double> K = sc.kind == ScenarioSpec::Kind::vacuum
                                                 ? vacuum_wightman(vc, L)
                                                 : thermal_wightman(vc, L, sc.T);
                    return std::exp(-v * v / (4.0 * s2)) * K;
                },
                0.0, cut, spec.rel_tol_1d, spec.max_panels);
            I = -2.0 * sigma * sqrt_pi * std::exp(-x * x) * q.value;
        }
        eps.push_back(e);
        vals.push_back(I);
    }
    return neville_extrapolate(eps, vals, err_out);
}

}  // namespace udw
