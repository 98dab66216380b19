#include "twosector/roots.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "twosector/errors.hpp"

namespace twosector {

namespace {

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

double checked(const ScalarFn& f, double x) {
    const double y = f(x);
    if (std::isnan(y)) {
        throw NumericalError(fmt::format("root function returned NaN at x = {}", x));
    }
    return y;
}

}  // namespace

RootResult find_bracketed_root(const ScalarFn& f, double lo, double hi, const RootOptions& opts) {
    if (lo > hi) std::swap(lo, hi);
    double flo = checked(f, lo);
    double fhi = checked(f, hi);
    if (flo == 0.0) return {lo, flo, lo, hi, 0};
    if (fhi == 0.0) return {hi, fhi, lo, hi, 0};
    if (sign_of(flo) == sign_of(fhi)) {
        throw BracketError(fmt::format("no sign change on [{}, {}] (f = {}, {})", lo, hi, flo, fhi),
                           lo, hi);
    }

    // Illinois: halve the retained endpoint's value when the same side is kept
    // twice. A step that fails to halve the bracket forces a bisection next.
    int last_side = 0;
    bool force_bisect = false;
    for (std::size_t it = 1; it <= opts.max_iter; ++it) {
        const double width = hi - lo;
        double x = (lo * fhi - hi * flo) / (fhi - flo);
        if (force_bisect || !(x > lo && x < hi)) x = 0.5 * (lo + hi);

        const double fx = checked(f, x);
        if (fx == 0.0 || std::abs(fx) <= opts.f_tol) {
            return {x, fx, lo, hi, it};
        }
        if (sign_of(fx) == sign_of(flo)) {
            lo = x;
            flo = fx;
            if (last_side == -1) fhi *= 0.5;
            last_side = -1;
        } else {
            hi = x;
            fhi = fx;
            if (last_side == 1) flo *= 0.5;
            last_side = 1;
        }
        force_bisect = hi - lo > 0.5 * width;
        const double mid = 0.5 * (lo + hi);
        const bool adjacent = mid <= lo || mid >= hi;
        if (adjacent || hi - lo <= opts.tol * std::max(1.0, std::abs(mid))) {
            // report whichever of the three candidates has the smallest residual
            RootResult best{mid, adjacent ? fx : checked(f, mid), lo, hi, it};
            if (adjacent) best.root = x;
            for (double cand : {lo, hi}) {
                const double fc = checked(f, cand);
                if (std::abs(fc) < std::abs(best.f_root)) {
                    best.root = cand;
                    best.f_root = fc;
                }
            }
            return best;
        }
    }
    throw ConvergenceError(fmt::format("root not converged in {} iterations; bracket [{}, {}]",
                                       opts.max_iter, lo, hi));
}

Bracket expand_bracket(const ScalarFn& f, const BracketPolicy& policy) {
    double a = policy.start_lo;
    double b = policy.start_hi;
    double fa = checked(f, a);
    double fb = checked(f, b);
    if (sign_of(fa) != sign_of(fb) || fa == 0.0 || fb == 0.0) {
        return {a, b, a, b};
    }
    while (a > policy.min_lo || b < policy.max_hi) {
        const double na = std::max(a / policy.factor, policy.min_lo);
        const double nb = std::min(b * policy.factor, policy.max_hi);
        const double fna = na < a ? checked(f, na) : fa;
        const double fnb = nb > b ? checked(f, nb) : fb;
        if (sign_of(fna) != sign_of(fa) || fna == 0.0) return {na, a, na, nb};
        if (sign_of(fnb) != sign_of(fb) || fnb == 0.0) return {b, nb, na, nb};
        a = na;
        b = nb;
        fa = fna;
        fb = fnb;
    }
    throw BracketError(fmt::format("no sign change found on [{}, {}]", a, b), a, b);
}

}  // namespace twosector
