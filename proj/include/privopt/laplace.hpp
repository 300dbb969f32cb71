#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "privopt/rng.hpp"

namespace privopt {

// Rate parameter of the Laplace obfuscation noise, density
// (lambda/2) e^{-lambda |z|}. Smaller lambda means wider noise and stronger
// privacy. Note this is the rate convention, not the scale b = 1/lambda some
// texts use.
struct PrivacyParams {
    double lambda;

    explicit PrivacyParams(double lambda_) : lambda(lambda_) {
        if (!(std::isfinite(lambda) && lambda > 0.0)) {
            throw std::invalid_argument("PrivacyParams: lambda must be finite and > 0");
        }
    }
};

// A noisy declared availability. Real-valued on purpose: declarations may
// fall below 0 or above n, and every downstream formula stays valid there,
// so nothing is rounded or clamped.
struct Declaration {
    double value = 0.0;
};

inline double laplace_log_density(const PrivacyParams& params, double center, double x) {
    if (!std::isfinite(center) || !std::isfinite(x)) {
        throw std::invalid_argument("laplace_log_density: center and x must be finite");
    }
    return std::log(0.5 * params.lambda) - params.lambda * std::fabs(x - center);
}

// Linear-space density, exposed for testing; real work stays in log space.
inline double laplace_density(const PrivacyParams& params, double center, double x) {
    return std::exp(laplace_log_density(params, center, x));
}

inline double laplace_cdf(const PrivacyParams& params, double center, double x) {
    const double z = x - center;
    if (z < 0.0) return 0.5 * std::exp(params.lambda * z);
    return 1.0 - 0.5 * std::exp(-params.lambda * z);
}

// Inverse CDF of the centered noise. Maps u = 1/2 to exactly 0.
inline double laplace_quantile(const PrivacyParams& params, double u) {
    if (!(u > 0.0 && u < 1.0)) {
        throw std::invalid_argument("laplace_quantile: u must lie in (0, 1)");
    }
    if (u < 0.5) return std::log(2.0 * u) / params.lambda;
    if (u > 0.5) return -std::log(2.0 * (1.0 - u)) / params.lambda;
    return 0.0;
}

// Declared availability: the true count plus one inverse-CDF Laplace draw.
// Exactly one uniform variate is consumed per declaration, which keeps whole
// runs reproducible from a single seed.
inline Declaration sample_declaration(const PrivacyParams& params, std::int64_t true_k,
                                      SplitMix64& rng) {
    if (true_k < 0) throw std::invalid_argument("sample_declaration: true_k must be >= 0");
    return Declaration{static_cast<double>(true_k) + laplace_quantile(params, rng.next_unit_open())};
}

}  // namespace privopt
