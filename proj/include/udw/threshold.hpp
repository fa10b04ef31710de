#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <thread>
#include <vector>

#include "udw/observables.hpp"

// Entanglement classification (|X| > A) and the geometry of the entangled
// region in the (L, Omega) plane: frequency windows at fixed separation, the
// largest separation with a non-empty window, and the lattice comparison
// showing the expanding region sits inside the thermal one.

namespace udw {

enum class Verdict { separable, entangled, indeterminate };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::separable: return "separable";
        case Verdict::entangled: return "entangled";
        case Verdict::indeterminate: return "indeterminate";
    }
    return "?";
}

struct ClassifyResult {
    Verdict verdict = Verdict::indeterminate;
    ObservableResult obs;
    double margin_rel = 0.0;  // | |X| - A | relative to max(|X|, A)
    double error_rel = 0.0;   // combined instrument estimate at the same scale
};

// Verdict with its error bar.  Stays "indeterminate" when the margin is
// inside the combined instrument estimate; exact ties are never entangled.
inline ClassifyResult try_classify(const ScenarioSpec& sc, const DetectorParams& p,
                                   Method m = Method::auto_tier,
                                   const QuadratureSpec& spec = {}) {
    ClassifyResult r;
    r.obs = observables(sc, p, m, spec);
    ScaledComplex ax = r.obs.X.abs();
    int cmp = compare_abs(ax, r.obs.A);
    ScaledComplex big = cmp >= 0 ? ax : r.obs.A;
    ScaledComplex diff = cmp >= 0 ? ax - r.obs.A : r.obs.A - ax;
    r.margin_rel = diff.is_zero() ? 0.0 : std::exp(diff.log_abs() - big.log_abs());
    r.error_rel = r.obs.A_rel_error + r.obs.X_rel_error + 1e-15;
    if (cmp == 0 || r.margin_rel <= r.error_rel)
        r.verdict = Verdict::indeterminate;
    else
        r.verdict = cmp > 0 ? Verdict::entangled : Verdict::separable;
    return r;
}

inline ClassifyResult classify(const ScenarioSpec& sc, const DetectorParams& p,
                               Method m = Method::auto_tier,
                               const QuadratureSpec& spec = {}) {
    ClassifyResult r = try_classify(sc, p, m, spec);
    if (r.verdict == Verdict::indeterminate)
        throw IndeterminateError("classify: margin below the instrument error",
                                 r.margin_rel, r.error_rel);
    return r;
}

// Omega interval with |X| > A at fixed separation.  `upper` is +infinity for
// a window that stays open through the top of the scan.
struct FrequencyWindow {
    bool empty = true;
    bool closed_above = false;
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
};

namespace detail {

// raw ordering of |X| vs A; ties count as separable
inline int entangled_sign(const ScenarioSpec& sc, double sigma, double x, double L,
                          const QuadratureSpec& spec) {
    auto obs = observables(sc, {sigma, x / sigma, L}, Method::auto_tier, spec);
    return compare_abs(obs.X.abs(), obs.A) > 0 ? 1 : -1;
}

// log-spaced scan grid in x = sigma Omega, 64 points per decade
inline std::vector<double> scan_grid(double x_lo, double x_hi) {
    int n = static_cast<int>(std::ceil(64.0 * std::log10(x_hi / x_lo))) + 1;
    std::vector<double> xs(n);
    for (int k = 0; k < n; ++k)
        xs[k] = x_lo * std::pow(x_hi / x_lo, double(k) / double(n - 1));
    return xs;
}

inline double scan_top(const ScenarioSpec& sc, double sigma, double L) {
    double x_hi = 5.0 * L / sigma;  // an order past the expected onset at L/2 sigma
    if (sc.kind != ScenarioSpec::Kind::vacuum)
        // past the absorption wall at the first image scale 1/(2 sigma T)
        x_hi = std::max(x_hi, 1.5 / (sigma * sc.T));
    return x_hi;
}

}  // namespace detail

// Scan and bisect the entanglement boundaries in Omega at fixed L.  The
// expected topology is a single window (at most two crossings); anything
// else aborts rather than returning a half-described region.
inline FrequencyWindow critical_frequencies(const ScenarioSpec& sc, double sigma, double L,
                                            const QuadratureSpec& spec = {}) {
    DetectorParams{sigma, 0.0, L}.validate(true);
    const double x_lo = 1e-2;
    const std::vector<double> xs = detail::scan_grid(x_lo, detail::scan_top(sc, sigma, L));

    auto sign_at = [&](double x) { return detail::entangled_sign(sc, sigma, x, L, spec); };
    auto bisect = [&](double a, double b, int sa) {
        while (b / a - 1.0 > 1e-4) {
            double mid = std::sqrt(a * b);
            (sign_at(mid) == sa ? a : b) = mid;
        }
        return std::sqrt(a * b);
    };

    std::vector<double> crossings;
    int first = sign_at(xs.front());
    int prev = first;
    for (std::size_t k = 1; k < xs.size(); ++k) {
        int s = sign_at(xs[k]);
        if (s != prev) {
            crossings.push_back(bisect(xs[k - 1], xs[k], prev));
            prev = s;
        }
    }
    if (crossings.size() > 2 || (first > 0 && !crossings.empty()))
        throw TopologyError("critical_frequencies: window topology is not a single "
                            "interval over the scan range");

    FrequencyWindow w;
    if (crossings.empty()) {
        if (first > 0) {  // open through the whole scan
            w.empty = false;
            w.lower = x_lo / sigma;
        }
        return w;
    }
    w.empty = false;
    w.lower = crossings.front() / sigma;
    if (crossings.size() == 2) {
        w.closed_above = true;
        w.upper = crossings.back() / sigma;
    }
    return w;
}

// Largest separation whose frequency window is non-empty, found by bisection
// on window emptiness.  Uses a bare any-entangled scan, so it stays usable
// even where the window shape would fail the topology check.  Returns
// +infinity if the window is still open at the upper bracket.
inline double max_entangled_separation(const ScenarioSpec& sc, double sigma,
                                       const QuadratureSpec& spec = {},
                                       double L_lo = -1.0, double L_hi = -1.0) {
    if (L_lo <= 0.0) L_lo = 50.0 * sigma;
    if (L_hi <= 0.0) L_hi = 2e4 * sigma;
    if (!(L_lo < L_hi)) throw DomainError("max_entangled_separation: bad bracket");

    auto any_entangled = [&](double L) {
        for (double x : detail::scan_grid(1e-2, detail::scan_top(sc, sigma, L)))
            if (detail::entangled_sign(sc, sigma, x, L, spec) > 0) return true;
        return false;
    };

    if (!any_entangled(L_lo))
        throw DomainError("max_entangled_separation: nothing entangled at the lower "
                          "bracket");
    if (any_entangled(L_hi)) return std::numeric_limits<double>::infinity();

    double a = L_lo, b = L_hi;
    while (b / a - 1.0 > 1e-3) {
        double mid = std::sqrt(a * b);
        (any_entangled(mid) ? a : b) = mid;
    }
    return std::sqrt(a * b);
}

// Lattice comparison of the thermal and expanding entangled regions at equal
// temperature.  A violation is a point confidently entangled in the expanding
// scenario but confidently separable in the thermal one; a witness is the
// reverse.  Points whose margin is inside the error bars on either side are
// counted indeterminate and claim nothing.
struct SubsetReport {
    int checked = 0;
    int violations = 0;
    int witnesses = 0;
    int indeterminate = 0;
    bool witness_in_band = false;  // a witness with L in (1e3, 2e3) sigma
    double witness_L = 0.0;
    double witness_Omega = 0.0;
    bool subset_holds() const { return violations == 0; }
};

inline SubsetReport subset_check(double sigma, double T, const QuadratureSpec& spec = {},
                                 int n_L = 40, int n_Omega = 40, int threads = 1) {
    if (n_L < 2 || n_Omega < 2) throw DomainError("subset_check: lattice too small");
    if (threads < 1) threads = 1;
    const double L_lo = 1e2 * sigma, L_hi = 5e3 * sigma;
    const double x_lo = 1e-1, x_hi = 1e3;
    auto thermal = ScenarioSpec::thermal(T);
    auto expanding = ScenarioSpec::de_sitter(T);

    const int total = n_L * n_Omega;
    // +1 confidently entangled, -1 confidently separable, 0 no claim
    std::vector<std::int8_t> th(total), ds(total);

    auto verdict_of = [&](const ScenarioSpec& sc, double Omega, double L) -> std::int8_t {
        try {
            switch (try_classify(sc, {sigma, Omega, L}, Method::auto_tier, spec).verdict) {
                case Verdict::entangled: return 1;
                case Verdict::separable: return -1;
                case Verdict::indeterminate: return 0;
            }
        } catch (const BreakdownError&) {
        } catch (const GuardError&) {
        } catch (const PoleCrossingError&) {
        } catch (const AccuracyError&) {
        }
        return 0;
    };
    auto point = [&](int idx, double* L_out, double* Om_out) {
        int i = idx / n_Omega, j = idx % n_Omega;
        *L_out = L_lo * std::pow(L_hi / L_lo, double(i) / double(n_L - 1));
        *Om_out = x_lo * std::pow(x_hi / x_lo, double(j) / double(n_Omega - 1)) / sigma;
    };

    auto worker = [&](int t0) {
        for (int idx = t0; idx < total; idx += threads) {
            double L, Om;
            point(idx, &L, &Om);
            th[idx] = verdict_of(thermal, Om, L);
            ds[idx] = verdict_of(expanding, Om, L);
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& w : pool) w.join();
    }

    // sequential reduction in index order: identical for any thread count
    SubsetReport rep;
    rep.checked = total;
    for (int idx = 0; idx < total; ++idx) {
        if (th[idx] == 0 || ds[idx] == 0) ++rep.indeterminate;
        if (ds[idx] == 1 && th[idx] == -1) ++rep.violations;
        if (th[idx] == 1 && ds[idx] == -1) {
            ++rep.witnesses;
            double L, Om;
            point(idx, &L, &Om);
            bool in_band = L > 1e3 * sigma && L < 2e3 * sigma;
            if (in_band && !rep.witness_in_band) {
                rep.witness_in_band = true;
                rep.witness_L = L;
                rep.witness_Omega = Om;
            } else if (rep.witnesses == 1) {
                rep.witness_L = L;
                rep.witness_Omega = Om;
            }
        }
    }
    return rep;
}

}  // namespace udw
