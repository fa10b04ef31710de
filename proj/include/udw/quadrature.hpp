#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "udw/errors.hpp"
#include "udw/scaled.hpp"
#include "udw/special_functions.hpp"

namespace udw {

// Control block shared by every numerical route.  window_cut is the Gaussian
// truncation radius in units of sigma: the discarded tail carries weight
// erfc(cut/2) < 2e-8 at cut = 8, ~2e-16 at 12.
struct QuadratureSpec {
    double rel_tol_1d = 1e-9;
    double rel_tol_2d = 1e-7;
    double window_cut = 12.0;
    int series_order = 8;
    int max_panels = 4000;
    int eps_k_lo = 4, eps_k_hi = 10;  // epsilon ladder sigma * 2^-k (validation mode)

    void validate() const {
        if (!(rel_tol_1d > 0.0) || !(rel_tol_2d > 0.0))
            throw GuardError("QuadratureSpec: tolerances must be positive");
        if (window_cut < 8.0)
            throw GuardError("QuadratureSpec: window_cut < 8 discards real weight");
        if (series_order < 2 || series_order % 2 != 0)
            throw GuardError("QuadratureSpec: series_order must be even and >= 2");
        if (max_panels < 16) throw GuardError("QuadratureSpec: max_panels too small");
        if (eps_k_lo >= eps_k_hi) throw GuardError("QuadratureSpec: bad epsilon ladder");
    }
};

struct IntegralResult {
    std::complex<double> value;
    double error = 0.0;  // absolute
    int panels = 0;
};

namespace detail {

// 15-point Kronrod extension of 7-point Gauss (positive nodes).
inline constexpr std::array<double, 8> gk_nodes = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr std::array<double, 8> gk_wk = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr std::array<double, 4> gk_wg = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <class F>
void gk15(F&& f, double a, double b, std::complex<double>& integral, double& err,
          double& l1) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    std::complex<double> fc = f(c);
    std::complex<double> resk = gk_wk[7] * fc;
    std::complex<double> resg = gk_wg[3] * fc;
    double resl1 = gk_wk[7] * std::abs(fc);
    for (int i = 0; i < 7; ++i) {
        std::complex<double> fsum = f(c - h * gk_nodes[i]) + f(c + h * gk_nodes[i]);
        resk += gk_wk[i] * fsum;
        resl1 += gk_wk[i] * std::abs(fsum);
        if (i % 2 == 1) resg += gk_wg[i / 2] * fsum;  // odd entries are the Gauss nodes
    }
    integral = resk * h;
    err = std::abs(resk - resg) * std::fabs(h);
    l1 = resl1 * std::fabs(h);
}

}  // namespace detail

// Deterministic depth-first adaptive Gauss-Kronrod on [a, b].  The local
// acceptance threshold distributes rel_tol * L1(whole) proportionally to
// panel width, which keeps the rule honest on cancelling integrands.
template <class F>
IntegralResult adaptive_gk15(F&& f, double a, double b, double rel_tol, int max_panels) {
    if (!(b > a)) throw DomainError("adaptive_gk15: need a < b");
    std::complex<double> iw;
    double ew, l1w;
    detail::gk15(f, a, b, iw, ew, l1w);
    double scale = l1w > 0.0 ? l1w : 1e-300;
    double tol_abs = rel_tol * scale;

    IntegralResult out;
    out.panels = 1;
    const double W = b - a;

    struct Frame {
        double a, b;
        std::complex<double> I;
        double err;
    };
    std::vector<Frame> stack;
    stack.push_back({a, b, iw, ew});
    std::complex<double> acc = 0.0;
    double acc_err = 0.0;
    while (!stack.empty()) {
        Frame fr = stack.back();
        stack.pop_back();
        double width = fr.b - fr.a;
        bool narrow = width < 1e-13 * std::fabs(W);
        if (fr.err <= tol_abs * (width / W) || narrow) {
            acc += fr.I;
            acc_err += fr.err;
            continue;
        }
        if (out.panels + 2 > max_panels) {
            // salvage what is on the stack for the error report
            std::complex<double> best = acc + fr.I;
            double best_err = acc_err + fr.err;
            for (const auto& s : stack) {
                best += s.I;
                best_err += s.err;
            }
            throw AccuracyError("adaptive_gk15: panel budget exhausted", best, best_err);
        }
        double m = 0.5 * (fr.a + fr.b);
        Frame le, ri;
        le.a = fr.a;
        le.b = m;
        ri.a = m;
        ri.b = fr.b;
        double l1d;
        detail::gk15(f, le.a, le.b, le.I, le.err, l1d);
        detail::gk15(f, ri.a, ri.b, ri.I, ri.err, l1d);
        out.panels += 2;
        stack.push_back(ri);  // left half processed first: deterministic ordering
        stack.push_back(le);
    }
    out.value = acc;
    out.error = acc_err;
    return out;
}

// Integral along the polyline z[0] -> z[1] -> ... (complex straight segments).
template <class F>
IntegralResult integrate_path(F&& f, const std::vector<std::complex<double>>& z,
                              double rel_tol, int max_panels) {
    if (z.size() < 2) throw DomainError("integrate_path: need at least two waypoints");
    IntegralResult total;
    for (std::size_t i = 0; i + 1 < z.size(); ++i) {
        std::complex<double> z0 = z[i], dz = z[i + 1] - z[i];
        auto seg = adaptive_gk15([&](double t) { return f(z0 + t * dz) * dz; }, 0.0, 1.0,
                                 rel_tol, max_panels);
        total.value += seg.value;
        total.error += seg.error;
        total.panels += seg.panels;
    }
    return total;
}

// G_n = integral v^n exp(-v^2/4 sigma^2) exp(-i Omega v) dv over the line,
// exact:  2 sigma sqrt(pi) e^{-sigma^2 Omega^2}
//         sum_{j even <= n} C(n,j) (-2 i sigma^2 Omega)^{n-j} (j-1)!! (2 sigma^2)^{j/2}.
// The e^{-sigma^2 Omega^2} lives in the ScaledComplex exponent.
inline ScaledComplex gaussian_moment(int n, double sigma, double Omega) {
    if (n < 0 || sigma <= 0.0) throw DomainError("gaussian_moment: bad input");
    std::complex<double> shift(0.0, -2.0 * sigma * sigma * Omega);
    std::vector<std::complex<double>> pw(static_cast<std::size_t>(n) + 1);
    pw[0] = 1.0;
    for (int k = 1; k <= n; ++k) pw[k] = pw[k - 1] * shift;
    std::complex<double> poly = 0.0;
    double binom = 1.0;  // C(n, j)
    double dfact = 1.0;  // (j-1)!!
    double pow2s = 1.0;  // (2 sigma^2)^{j/2}
    for (int j = 0; j <= n; j += 2) {
        if (j > 0) {
            binom = binom * (n - j + 2) * (n - j + 1) / (j * (j - 1));
            dfact *= (j - 1);
            pow2s *= 2.0 * sigma * sigma;
        }
        poly += binom * dfact * pow2s * pw[n - j];
    }
    ScaledComplex pref = ScaledComplex::exp_of(-sigma * sigma * Omega * Omega);
    return pref * ScaledComplex(2.0 * sigma * sqrt_pi) * ScaledComplex(poly);
}

// H_n = integral_0^inf v^n exp(-v^2/4 sigma^2) dv;
// H_0 = sigma sqrt(pi), H_1 = 2 sigma^2, H_n = 2 sigma^2 (n-1) H_{n-2}.
inline double half_gaussian_moment(int n, double sigma) {
    if (n < 0 || sigma <= 0.0) throw DomainError("half_gaussian_moment: bad input");
    double h0 = sigma * sqrt_pi, h1 = 2.0 * sigma * sigma;
    if (n == 0) return h0;
    if (n == 1) return h1;
    double h = (n % 2 == 0) ? h0 : h1;
    for (int m = (n % 2 == 0) ? 2 : 3; m <= n; m += 2) h *= 2.0 * sigma * sigma * (m - 1);
    return h;
}

// Neville polynomial extrapolation of f(eps) to eps = 0.  Error estimate is
// the last diagonal correction.
inline std::complex<double> neville_extrapolate(const std::vector<double>& eps,
                                                const std::vector<std::complex<double>>& val,
                                                double* err_out = nullptr) {
    if (eps.size() != val.size() || eps.size() < 2)
        throw DomainError("neville_extrapolate: bad ladder");
    std::vector<std::complex<double>> p = val;
    std::complex<double> prev_diag = p[0];
    for (std::size_t m = 1; m < p.size(); ++m) {
        for (std::size_t i = 0; i + m < p.size(); ++i) {
            p[i] = (eps[i] * p[i + 1] - eps[i + m] * p[i]) / (eps[i] - eps[i + m]);
        }
        if (m + 1 < p.size()) prev_diag = p[0];
    }
    if (err_out) *err_out = std::abs(p[0] - prev_diag);
    return p[0];
}

}  // namespace udw
