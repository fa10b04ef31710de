#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace udw {

// Complex number stored as mantissa * exp(scale), |mantissa| in [1, e).
// Amplitudes carry factors like exp(-sigma^2 Omega^2) that underflow a bare
// double long before the physics becomes uninteresting; keeping the exponent
// separate makes ratios and |X| vs A comparisons exact at any magnitude.
class ScaledComplex {
  public:
    ScaledComplex() = default;
    ScaledComplex(double v) : m_(v) { normalize(); }                       // NOLINT implicit
    ScaledComplex(std::complex<double> v) : m_(v) { normalize(); }         // NOLINT implicit
    ScaledComplex(std::complex<double> mantissa, double scale) : m_(mantissa), s_(scale) {
        normalize();
    }

    static ScaledComplex exp_of(double x) { return ScaledComplex(std::complex<double>(1.0, 0.0), x); }

    std::complex<double> mantissa() const { return m_; }
    double scale() const { return s_; }
    bool is_zero() const { return m_ == std::complex<double>(0.0); }

    // ln|value|; -inf for zero.
    double log_abs() const {
        if (is_zero()) return -std::numeric_limits<double>::infinity();
        return s_ + std::log(std::abs(m_));
    }

    std::complex<double> to_complex() const {
        if (is_zero()) return {0.0, 0.0};
        return m_ * std::exp(s_);  // may under/overflow by design
    }

    // Mantissa re-expressed at a caller-chosen scale (value = result * exp(scale)).
    std::complex<double> rebase(double scale) const {
        if (is_zero()) return {0.0, 0.0};
        return m_ * std::exp(s_ - scale);
    }

    ScaledComplex operator-() const { return raw(-m_, s_); }
    ScaledComplex conj() const { return raw(std::conj(m_), s_); }
    ScaledComplex abs() const { return raw({std::abs(m_), 0.0}, s_); }

    friend ScaledComplex operator*(const ScaledComplex& a, const ScaledComplex& b) {
        if (a.is_zero() || b.is_zero()) return {};
        ScaledComplex r;
        r.m_ = a.m_ * b.m_;
        r.s_ = a.s_ + b.s_;
        r.normalize();
        return r;
    }
    friend ScaledComplex operator/(const ScaledComplex& a, const ScaledComplex& b) {
        ScaledComplex r;
        r.m_ = a.m_ / b.m_;
        r.s_ = a.s_ - b.s_;
        r.normalize();
        return r;
    }
    friend ScaledComplex operator+(const ScaledComplex& a, const ScaledComplex& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        const ScaledComplex *hi = &a, *lo = &b;
        if (a.s_ < b.s_) std::swap(hi, lo);
        double gap = lo->s_ - hi->s_;  // <= 0
        ScaledComplex r;
        r.s_ = hi->s_;
        r.m_ = hi->m_ + (gap < -745.0 ? std::complex<double>(0.0) : lo->m_ * std::exp(gap));
        r.normalize();
        return r;
    }
    friend ScaledComplex operator-(const ScaledComplex& a, const ScaledComplex& b) { return a + (-b); }

    ScaledComplex& operator*=(const ScaledComplex& o) { return *this = *this * o; }
    ScaledComplex& operator+=(const ScaledComplex& o) { return *this = *this + o; }
    ScaledComplex& operator-=(const ScaledComplex& o) { return *this = *this - o; }

    // Ratio as a plain double (alignment happens in the exponent).
    friend std::complex<double> ratio(const ScaledComplex& a, const ScaledComplex& b) {
        return (a.m_ / b.m_) * std::exp(a.s_ - b.s_);
    }

    // Sign of |a| - |b| without forming either magnitude.  The scales are
    // differenced first: when both values inherit the same exp(...) factor
    // the difference is exactly zero and the mantissas decide, so margins far
    // below one ulp of the scale survive.
    friend int compare_abs(const ScaledComplex& a, const ScaledComplex& b) {
        if (a.is_zero() || b.is_zero()) {
            if (a.is_zero() && b.is_zero()) return 0;
            return a.is_zero() ? -1 : 1;
        }
        double d = (a.s_ - b.s_) + (std::log(std::abs(a.m_)) - std::log(std::abs(b.m_)));
        if (d < 0.0) return -1;
        if (d > 0.0) return 1;
        return 0;
    }

  private:
    static ScaledComplex raw(std::complex<double> m, double s) {
        ScaledComplex r;
        r.m_ = m;
        r.s_ = s;
        if (r.is_zero()) r.s_ = 0.0;
        return r;
    }
    void normalize() {
        if (is_zero()) {
            s_ = 0.0;
            return;
        }
        double k = std::floor(std::log(std::abs(m_)));
        if (k != 0.0) {
            m_ *= std::exp(-k);
            s_ += k;
        }
    }

    std::complex<double> m_{0.0, 0.0};
    double s_ = 0.0;
};

}  // namespace udw
