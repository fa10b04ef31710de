#pragma once

#include <complex>
#include <vector>

#include "udw/errors.hpp"
#include "udw/quadrature.hpp"
#include "udw/scaled.hpp"
#include "udw/special_functions.hpp"
#include "udw/wightman.hpp"

// Truncated Taylor route: kernels are expanded about u = v = 0 with
// coefficients exact in T (no expansion in T itself), then contracted against
// closed-form Gaussian moments.  Every product tracks the largest coefficient
// it had to drop, so downstream error estimates see the truncation.

namespace udw {

class BivariateSeries {
  public:
    BivariateSeries(int order_u, int order_v)
        : mu_(order_u), nv_(order_v),
          c_(static_cast<std::size_t>(order_u + 1) * (order_v + 1), 0.0) {
        if (order_u < 0 || order_v < 0) throw DomainError("BivariateSeries: bad order");
    }

    int order_u() const { return mu_; }
    int order_v() const { return nv_; }

    std::complex<double>& at(int m, int n) { return c_[idx(m, n)]; }
    const std::complex<double>& at(int m, int n) const { return c_[idx(m, n)]; }

    double truncation_estimate() const { return trunc_; }
    void bump_truncation(double t) {
        if (t > trunc_) trunc_ = t;
    }

    BivariateSeries& operator+=(const BivariateSeries& o) {
        check_shape(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        trunc_ = std::max(trunc_, o.trunc_);
        return *this;
    }
    BivariateSeries& operator-=(const BivariateSeries& o) {
        check_shape(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        trunc_ = std::max(trunc_, o.trunc_);
        return *this;
    }
    BivariateSeries& scale(std::complex<double> s) {
        for (auto& x : c_) x *= s;
        trunc_ *= std::abs(s);
        return *this;
    }

    friend BivariateSeries mul(const BivariateSeries& a, const BivariateSeries& b) {
        a.check_shape(b);
        BivariateSeries r(a.mu_, a.nv_);
        r.trunc_ = std::max(a.trunc_, b.trunc_);
        for (int ma = 0; ma <= a.mu_; ++ma)
            for (int na = 0; na <= a.nv_; ++na) {
                std::complex<double> ca = a.at(ma, na);
                if (ca == 0.0) continue;
                for (int mb = 0; mb <= b.mu_; ++mb)
                    for (int nb = 0; nb <= b.nv_; ++nb) {
                        std::complex<double> t = ca * b.at(mb, nb);
                        if (t == 0.0) continue;
                        int m = ma + mb, n = na + nb;
                        if (m <= r.mu_ && n <= r.nv_)
                            r.at(m, n) += t;
                        else
                            r.trunc_ = std::max(r.trunc_, std::abs(t));
                    }
            }
        return r;
    }

    // 1/F for F with nonzero constant term, as the Neumann sum
    // (1/c00) sum_{j<=mu+nv} (-(F-c00)/c00)^j; powers beyond mu+nv cannot
    // touch retained coefficients because (F-c00) has no constant term.
    static BivariateSeries reciprocal(const BivariateSeries& F) {
        std::complex<double> c00 = F.at(0, 0);
        if (std::abs(c00) == 0.0) throw DomainError("reciprocal: zero constant term");
        BivariateSeries G = F;
        G.at(0, 0) = 0.0;
        G.scale(-1.0 / c00);
        BivariateSeries r(F.mu_, F.nv_);
        r.at(0, 0) = 1.0;
        BivariateSeries p = r;  // G^j
        int jmax = F.mu_ + F.nv_;
        for (int j = 1; j <= jmax; ++j) {
            p = mul(p, G);
            r += p;
        }
        r.scale(1.0 / c00);
        return r;
    }

    std::complex<double> evaluate(std::complex<double> u, std::complex<double> v) const {
        // Horner in u of Horner in v
        std::complex<double> acc = 0.0;
        for (int m = mu_; m >= 0; --m) {
            std::complex<double> row = 0.0;
            for (int n = nv_; n >= 0; --n) row = row * v + at(m, n);
            acc = acc * u + row;
        }
        return acc;
    }

  private:
    std::size_t idx(int m, int n) const {
        if (m < 0 || m > mu_ || n < 0 || n > nv_)
            throw DomainError("BivariateSeries: index outside caps");
        return static_cast<std::size_t>(m) * (nv_ + 1) + n;
    }
    void check_shape(const BivariateSeries& o) const {
        if (mu_ != o.mu_ || nv_ != o.nv_)
            throw DomainError("BivariateSeries: shape mismatch");
    }

    int mu_, nv_;
    std::vector<std::complex<double>> c_;
    double trunc_ = 0.0;
};

// v-expansion of delta_response_kernel at fixed T:
//   c_{2k-2} = (T^2/4) (2k-1) 4^k B_{2k} (pi T)^{2k-2} / (2k)!   (k = 1..)
inline std::vector<double> expand_delta_response(double T, int order) {
    if (!(T >= 0.0)) throw DomainError("expand_delta_response: T >= 0");
    std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
    double factor = 1.0;  // 4^k/(2k)!
    double ppow = 1.0;    // (pi T)^{2k-2}
    for (int k = 1; 2 * k - 2 <= order && k <= 16; ++k) {
        factor *= 4.0 / ((2 * k) * (2 * k - 1));
        c[2 * k - 2] = (T * T / 4.0) * (2 * k - 1) * factor * bernoulli2k(k) * ppow;
        ppow *= (pi * T) * (pi * T);
    }
    return c;
}

// v-expansion of delta_thermal_wightman at fixed (L, T); even in v.  The
// kernel is (T/8 pi L)[cothm1(pi T(L-v)) + cothm1(pi T(L+v))]; expanding the
// pole sum coth x = 1/x + sum_j 2x/(x^2 + j^2 pi^2) about a = pi T L turns
// the n-th Taylor coefficient into a Hurwitz zeta value, with no cancellation
// at any order and no restriction on a.  The +-v branches cancel odd orders.
inline std::vector<double> expand_delta_thermal(double L, double T, int order) {
    if (!(L > 0.0) || !(T > 0.0)) throw DomainError("expand_delta_thermal: bad input");
    const double a = pi * T * L;
    const double pref = T / (4.0 * pi * L);
    std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
    c[0] = pref * cothm1(a);
    const std::complex<double> q(1.0, -a / pi);
    double scale = 1.0;  // (pi T)^n
    for (int n = 1; n <= order; ++n) {
        scale *= pi * T;
        if (n % 2 == 1) continue;
        std::complex<double> ipow = std::pow(std::complex<double>(0.0, pi), n + 1);
        double cn = 2.0 * (hurwitz_zeta(n + 1, q) / ipow).real();
        c[static_cast<std::size_t>(n)] = pref * cn * scale;
    }
    return c;
}

// Full exchange kernel as a bivariate series in (u, v).  Vacuum and thermal
// kernels do not depend on u (order_u collapses to 0).
inline BivariateSeries expand_exchange_kernel(const ScenarioSpec& sc, double L,
                                              int order) {
    if (!(L > 0.0)) throw DomainError("expand_exchange_kernel: L > 0");
    switch (sc.kind) {
        case ScenarioSpec::Kind::vacuum: {
            BivariateSeries k(0, order);
            double c = 1.0 / (4.0 * pi * pi * L * L);
            for (int n = 0; n <= order; n += 2) {
                k.at(0, n) = c;
                c /= L * L;
            }
            return k;
        }
        case ScenarioSpec::Kind::thermal: {
            BivariateSeries k(0, order);
            double c = 1.0 / (4.0 * pi * pi * L * L);
            for (int n = 0; n <= order; n += 2) {
                k.at(0, n) = c;
                c /= L * L;
            }
            auto d = expand_delta_thermal(L, sc.T, order);
            for (int n = 0; n <= order; ++n) k.at(0, n) += d[static_cast<std::size_t>(n)];
            return k;
        }
        case ScenarioSpec::Kind::de_sitter: {
            const double T = sc.T;
            BivariateSeries F(order, order);
            // stretched interval sinh^2(pi T v)/(pi T)^2:
            //   coefficient of v^{2k} is 2^{2k-1} (pi T)^{2k-2} / (2k)!
            double fact = 1.0;
            for (int k = 1; 2 * k <= order; ++k) {
                fact *= (2 * k) * (2 * k - 1);
                F.at(0, 2 * k) =
                    std::pow(2.0, 2 * k - 1) * std::pow(pi * T, 2 * k - 2) / fact;
            }
            // minus the conformally stretched cone exp(2 pi T u) L^2
            double m = 1.0;
            for (int mm = 0; mm <= order; ++mm) {
                F.at(mm, 0) += -L * L * m;
                m *= 2.0 * pi * T / (mm + 1);
            }
            BivariateSeries D = BivariateSeries::reciprocal(F);
            D.scale(-1.0 / (4.0 * pi * pi));
            return D;
        }
    }
    throw DomainError("expand_exchange_kernel: unknown scenario");
}

struct SeriesIntegral {
    ScaledComplex value;
    double rel_error = 0.0;       // frontier + dropped-product estimate
    double frontier_rel = 0.0;    // frontier alone (breakdown diagnostic)
};

// Response-type integral  sigma sqrt(pi) sum_n c_n G_n(sigma, Omega).
// Breakdown: the retained frontier must sit at least three orders of
// magnitude below the sum, otherwise the asymptotic series has turned.
inline SeriesIntegral series_integrate_response(const std::vector<double>& c, double sigma,
                                                double Omega) {
    ScaledComplex sum;
    ScaledComplex frontier;
    for (std::size_t n = 0; n < c.size(); ++n) {
        if (c[n] == 0.0) continue;
        ScaledComplex t = ScaledComplex(c[n]) * gaussian_moment(static_cast<int>(n), sigma, Omega);
        sum += t;
        bool on_frontier = n + 2 >= c.size();
        if (on_frontier && compare_abs(t.abs(), frontier) > 0) frontier = t.abs();
    }
    sum = sum * ScaledComplex(sigma * sqrt_pi);
    frontier = frontier * ScaledComplex(sigma * sqrt_pi);
    SeriesIntegral out;
    out.value = sum;
    if (sum.is_zero()) {
        out.rel_error = 1.0;
        out.frontier_rel = 1.0;
        return out;
    }
    double rel = frontier.is_zero() ? 0.0 : std::exp(frontier.log_abs() - sum.log_abs());
    out.frontier_rel = rel;
    out.rel_error = rel;
    if (rel > 1e-3)
        throw BreakdownError("series_integrate_response: frontier too large",
                             rel, sum.to_complex());
    return out;
}

// Exchange-type integral  -sum_{m,n} c[m][n] U_m H_n with U_m = G_m(sigma,-Omega).
inline SeriesIntegral series_integrate_exchange(const BivariateSeries& k, double sigma,
                                                double Omega) {
    const int MU = k.order_u(), NV = k.order_v();
    std::vector<ScaledComplex> U(static_cast<std::size_t>(MU) + 1);
    std::vector<double> H(static_cast<std::size_t>(NV) + 1);
    for (int m = 0; m <= MU; ++m) U[m] = gaussian_moment(m, sigma, -Omega);
    for (int n = 0; n <= NV; ++n) H[n] = half_gaussian_moment(n, sigma);

    ScaledComplex sum;
    ScaledComplex frontier;
    ScaledComplex mass;
    // moment-weighted absolute mass per row and per column; truncation drops
    // whole rows m > MU and columns n > NV, so the tail in each direction is
    // certified by continuing the corresponding band ladder
    std::vector<ScaledComplex> rowm(static_cast<std::size_t>(MU) + 1);
    std::vector<ScaledComplex> colm(static_cast<std::size_t>(NV) + 1);
    for (int m = 0; m <= MU; ++m)
        for (int n = 0; n <= NV; ++n) {
            std::complex<double> cmn = k.at(m, n);
            if (cmn == 0.0) continue;
            ScaledComplex t = ScaledComplex(cmn) * U[m] * ScaledComplex(H[n]);
            sum += t;
            ScaledComplex ta = t.abs();
            rowm[static_cast<std::size_t>(m)] += ta;
            colm[static_cast<std::size_t>(n)] += ta;
            mass += ta;
            bool on_frontier = (m >= MU - 1 && MU > 0) || n >= NV - 1;
            if (on_frontier && compare_abs(ta, frontier) > 0) frontier = ta;
        }
    SeriesIntegral out;
    out.value = -sum;
    if (sum.is_zero()) {
        out.rel_error = 1.0;
        out.frontier_rel = 1.0;
        return out;
    }
    out.frontier_rel =
        frontier.is_zero() ? 0.0 : std::exp(frontier.log_abs() - sum.log_abs());
    if (out.frontier_rel > 1e-3)
        throw BreakdownError("series_integrate_exchange: frontier too large",
                             out.frontier_rel, out.value.to_complex());

    // Continue a band ladder geometrically past its cap.  The last ratio can
    // still be growing (the moments eventually beat any Taylor radius), so
    // widen it by the observed ratio-of-ratios; never let that shrink it.
    auto band_tail = [&](const std::vector<ScaledComplex>& band) -> double {
        int last = -1, prev = -1, prev2 = -1;
        for (int d = 0; d < static_cast<int>(band.size()); ++d)
            if (!band[static_cast<std::size_t>(d)].is_zero()) {
                prev2 = prev;
                prev = last;
                last = d;
            }
        if (prev < 0)
            throw BreakdownError("series_integrate_exchange: too few orders to certify",
                                 1.0, out.value.to_complex());
        const auto& bl = band[static_cast<std::size_t>(last)];
        const auto& bp = band[static_cast<std::size_t>(prev)];
        double rho = std::exp(bl.log_abs() - bp.log_abs());
        if (prev2 >= 0) {
            double rho_prev =
                std::exp(bp.log_abs() - band[static_cast<std::size_t>(prev2)].log_abs());
            if (rho_prev > 0.0 && rho > rho_prev) rho *= rho / rho_prev;
        }
        if (!(rho < 0.9))
            throw BreakdownError("series_integrate_exchange: band ladder not converging",
                                 rho, out.value.to_complex());
        return std::exp(bl.log_abs() - sum.log_abs()) * rho / (1.0 - rho);
    };
    // MU == 0 means the kernel is exactly constant in u: nothing is dropped
    double tail = (MU == 0 ? 0.0 : band_tail(rowm)) + band_tail(colm);
    // cancellation meter for the retained block
    double cond = std::exp(mass.log_abs() - sum.log_abs());
    out.rel_error = tail + 1e-15 * cond;
    return out;
}

}  // namespace udw
