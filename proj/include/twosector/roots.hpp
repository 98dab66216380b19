#pragma once

#include <cstddef>
#include <functional>

namespace twosector {

using ScalarFn = std::function<double(double)>;

struct RootOptions {
    double tol = 1e-12;          ///< relative interval width: hi - lo <= tol * max(1, |x|)
    double f_tol = 0.0;          ///< accept early when |f(x)| <= f_tol
    std::size_t max_iter = 200;
};

struct RootResult {
    double root = 0.0;
    double f_root = 0.0;
    double lo = 0.0;  ///< final bracket
    double hi = 0.0;
    std::size_t iterations = 0;
};

/// Bisection safeguarded Illinois (modified regula falsi) iteration on a
/// bracket with a sign change. Deterministic.
///
/// Throws BracketError if f(lo) and f(hi) share a sign, ConvergenceError when
/// max_iter is exhausted.
RootResult find_bracketed_root(const ScalarFn& f, double lo, double hi,
                               const RootOptions& opts = {});

struct BracketPolicy {
    double start_lo = 0.5;
    double start_hi = 2.0;
    double factor = 4.0;
    double min_lo = 1e-12;
    double max_hi = 1e12;
};

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    /// Outermost interval evaluated while searching.
    double scanned_lo = 0.0;
    double scanned_hi = 0.0;
};

/// Expands [start_lo, start_hi] geometrically on both sides until a sign
/// change appears; the returned bracket is the sub-interval where it did.
/// Throws BracketError (carrying the scanned interval) when the policy's
/// bounds are reached first.
Bracket expand_bracket(const ScalarFn& f, const BracketPolicy& policy = {});

}  // namespace twosector
