#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace udw {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input outside the validity region of a routine (negative temperature, zero
// separation, window too narrow, ...).
struct DomainError : Error {
    using Error::Error;
};

// A kernel was evaluated too close to a light-cone or thermal-image pole.
// `index` is the image index (0 = light cone itself) and `side` the sign of
// the approach.
struct SingularityError : Error {
    int index;
    int side;
    SingularityError(const std::string& msg, int index_, int side_)
        : Error(msg), index(index_), side(side_) {}
};

// An adaptive rule ran out of its panel budget.  Carries the best value seen
// so the caller can decide whether the accuracy is still acceptable.
struct AccuracyError : Error {
    std::complex<double> best;
    double estimate;
    AccuracyError(const std::string& msg, std::complex<double> best_, double estimate_)
        : Error(msg), best(best_), estimate(estimate_) {}
};

// Truncated-series frontier stopped shrinking: the expansion parameter is too
// large for the requested order.
struct BreakdownError : Error {
    double last_term;
    std::complex<double> partial;
    BreakdownError(const std::string& msg, double last_term_, std::complex<double> partial_)
        : Error(msg), last_term(last_term_), partial(partial_) {}
};

// A contour shift would sweep across a kernel pole.
struct PoleCrossingError : Error {
    using Error::Error;
};

// A threshold scan found more sign changes than the expected topology allows.
struct TopologyError : Error {
    using Error::Error;
};

// |X| - A is smaller than the numerical error of either side; the point
// cannot be classified at the evaluated accuracy.
struct IndeterminateError : Error {
    double margin;
    double estimate;
    IndeterminateError(const std::string& msg, double margin_, double estimate_)
        : Error(msg), margin(margin_), estimate(estimate_) {}
};

// Configuration rejected before any numerics ran.
struct GuardError : Error {
    using Error::Error;
};

}  // namespace udw
