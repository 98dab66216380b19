#pragma once

#include <cmath>
#include <string_view>

#include "twosector/errors.hpp"

namespace twosector {

/// x^e for a strictly positive, finite base. Anything else is a DomainError
/// rather than a NaN propagating through the model.
inline double pos_pow(double base, double exponent, std::string_view what = "base") {
    if (!(base > 0.0) || !std::isfinite(base)) {
        throw DomainError(std::string("non-positive or non-finite ") + std::string(what) +
                          " in real power: " + std::to_string(base));
    }
    return std::pow(base, exponent);
}

inline void require_share(double s, std::string_view name) {
    if (!(s > 0.0 && s < 1.0)) {
        throw DomainError(std::string(name) + " must lie in (0,1), got " + std::to_string(s));
    }
}

inline void require_positive(double x, std::string_view name) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError(std::string(name) + " must be positive, got " + std::to_string(x));
    }
}

}  // namespace twosector
