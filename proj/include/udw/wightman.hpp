#pragma once

#include <complex>
#include <limits>

#include "udw/errors.hpp"
#include "udw/special_functions.hpp"

// Two-point kernels restricted to the detector worldlines, written in the
// centre/relative chart u = t + t', v = t - t'.  All of them are even in v;
// only the expanding-space kernel depends on u.  Poles are never regulated
// here: integration routines either keep their contours away from them or
// ask for the regular difference kernels.

namespace udw {

struct ScenarioSpec {
    enum class Kind { vacuum, thermal, de_sitter };
    Kind kind = Kind::vacuum;
    double T = 0.0;

    static ScenarioSpec vacuum() { return {Kind::vacuum, 0.0}; }
    static ScenarioSpec thermal(double T) {
        if (!(T > 0.0)) throw DomainError("ScenarioSpec: thermal needs T > 0");
        return {Kind::thermal, T};
    }
    static ScenarioSpec de_sitter(double T) {
        if (!(T > 0.0)) throw DomainError("ScenarioSpec: de_sitter needs T > 0");
        return {Kind::de_sitter, T};
    }

    // conformal expansion rate / surface gravity and the matching horizon size
    double kappa() const { return 2.0 * pi * T; }
    double horizon() const {
        return T > 0.0 ? 1.0 / kappa() : std::numeric_limits<double>::infinity();
    }
};

namespace detail {

inline void check_den(std::complex<double> den, double scale, const char* who) {
    if (std::abs(den) < 1e-13 * scale) throw SingularityError(who, 0, 0);
}

template <class C>
C sinhc(C z) {  // sinh(z)/z, series below |z| = 0.5
    if (std::abs(z) < 0.5) {
        C z2 = z * z, term = z2 / 6.0, sum = C(1.0) + term;
        for (int k = 2; k <= 10; ++k) {
            term *= z2 / double((2 * k) * (2 * k + 1));
            sum += term;
        }
        return sum;
    }
    return std::sinh(z) / z;
}

}  // namespace detail

// Flat static vacuum at detector separation L: -1/(4 pi^2 ((v)^2 - L^2)).
inline std::complex<double> vacuum_wightman(std::complex<double> v, double L) {
    if (!(L > 0.0)) throw DomainError("vacuum_wightman: L > 0 required");
    std::complex<double> den = (v - L) * (v + L);
    detail::check_den(den, L * L + std::norm(v), "vacuum_wightman: light cone");
    return -1.0 / (4.0 * pi * pi) / den;
}

// Same detector, same point: thermal response kernel -T^2/4 csch^2(pi T v).
// T = 0 falls back to the vacuum coincidence kernel -1/(4 pi^2 v^2).
inline std::complex<double> response_kernel(std::complex<double> v, double T) {
    if (T < 0.0) throw DomainError("response_kernel: T >= 0 required");
    if (T == 0.0) {
        detail::check_den(v * v, std::norm(v) + 1.0, "response_kernel: v = 0");
        return -1.0 / (4.0 * pi * pi) / (v * v);
    }
    std::complex<double> s = csch_c(pi * T * v);
    return -(T * T / 4.0) * s * s;
}

// response_kernel minus its vacuum part: -T^2/4 (csch^2(pi T v) - (pi T v)^-2).
// Regular on the whole real line, value T^2/12 at v = 0.
inline std::complex<double> delta_response_kernel(std::complex<double> v, double T) {
    if (T < 0.0) throw DomainError("delta_response_kernel: T >= 0 required");
    if (T == 0.0) return 0.0;
    return -(T * T / 4.0) * csch2m(pi * T * v);
}
inline double delta_response_kernel(double v, double T) {
    if (T < 0.0) throw DomainError("delta_response_kernel: T >= 0 required");
    if (T == 0.0) return 0.0;
    return -(T * T / 4.0) * csch2m(pi * T * v);
}

// Thermal state at separation L:
//   (T / 8 pi L) [coth(pi T (L - v)) + coth(pi T (L + v))]
// evaluated through the matched form
//   (T / 8 pi L) sinh(2 pi T L) / [sinh(pi T (L - v)) sinh(pi T (L + v))],
// which kills the coth cancellation at v >> L (the value there is an
// exponentially small difference of two near-unit coths).
inline std::complex<double> thermal_wightman(std::complex<double> v, double L, double T) {
    if (!(L > 0.0)) throw DomainError("thermal_wightman: L > 0 required");
    if (!(T > 0.0)) throw DomainError("thermal_wightman: T > 0 required");
    if (2.0 * pi * T * L > 700.0) throw DomainError("thermal_wightman: T*L overflows sinh");
    std::complex<double> za = pi * T * (L - v), zb = pi * T * (L + v);
    for (std::complex<double> z : {za, zb}) {
        int k = static_cast<int>(std::lround(z.imag() / pi));
        if (std::abs(z - std::complex<double>(0.0, k * pi)) < 1e-13 * (1.0 + std::abs(z)))
            throw SingularityError("thermal_wightman: image pole", k, 0);
    }
    return T / (8.0 * pi * L) * std::sinh(2.0 * pi * T * L) /
           (std::sinh(za) * std::sinh(zb));
}

// thermal_wightman minus vacuum_wightman; exact, the light-cone poles cancel
// identically: (T / 8 pi L) [cothm1(pi T (L - v)) + cothm1(pi T (L + v))].
inline double delta_thermal_wightman(double v, double L, double T) {
    if (!(L > 0.0)) throw DomainError("delta_thermal_wightman: L > 0 required");
    if (T == 0.0) return 0.0;
    if (T < 0.0) throw DomainError("delta_thermal_wightman: T >= 0 required");
    return T / (8.0 * pi * L) * (cothm1(pi * T * (L - v)) + cothm1(pi * T * (L + v)));
}

// Comoving pair in the exponentially expanding (conformal) state:
//   -1/(4 pi^2) / [ sinh^2(pi T v)/(pi T)^2 - exp(2 pi T u) L^2 ].
// T -> 0 recovers vacuum_wightman for every u.
inline std::complex<double> desitter_wightman(std::complex<double> u,
                                              std::complex<double> v, double L,
                                              double T) {
    if (!(L > 0.0)) throw DomainError("desitter_wightman: L > 0 required");
    if (T < 0.0) throw DomainError("desitter_wightman: T >= 0 required");
    std::complex<double> sc = detail::sinhc(std::complex<double>(pi * T) * v);
    std::complex<double> stretched = v * v * sc * sc;        // sinh^2(pi T v)/(pi T)^2
    std::complex<double> cone = std::exp(2.0 * pi * T * u) * (L * L);
    std::complex<double> den = stretched - cone;
    detail::check_den(den, std::abs(stretched) + std::abs(cone),
                      "desitter_wightman: light cone");
    return -1.0 / (4.0 * pi * pi) / den;
}

enum class KernelKind { vacuum, response, delta_response, thermal, delta_thermal, de_sitter };

// Uniform entry point used by the command-line probe.
inline std::complex<double> evaluate_kernel(KernelKind kind, std::complex<double> u,
                                            std::complex<double> v, double L, double T) {
    switch (kind) {
        case KernelKind::vacuum: return vacuum_wightman(v, L);
        case KernelKind::response: return response_kernel(v, T);
        case KernelKind::delta_response: return delta_response_kernel(v, T);
        case KernelKind::thermal: return thermal_wightman(v, L, T);
        case KernelKind::delta_thermal:
            return delta_thermal_wightman(v.real(), L, T);
        case KernelKind::de_sitter: return desitter_wightman(u, v, L, T);
    }
    throw DomainError("evaluate_kernel: unknown kind");
}

}  // namespace udw
