#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "privopt/laplace.hpp"
#include "privopt/logspace.hpp"
#include "privopt/prior.hpp"

namespace privopt {

// Posterior distribution of the true availability k given a declaration x.
// Weights live in log space, normalized so their log-sum-exp is 0; points the
// prior excludes keep the kLogZero sentinel.
struct PosteriorPmf {
    int n = 0;
    double x = 0.0;
    std::vector<double> log_weights;

    double weight(int i) const {
        const double lw = log_weights[static_cast<std::size_t>(i)];
        return is_log_zero(lw) ? 0.0 : std::exp(lw);
    }

    double mean() const {
        double acc = 0.0;
        for (int i = 0; i <= n; ++i) acc += i * weight(i);
        return acc;
    }

    // P[k > k_star].
    double tail_probability(std::int64_t k_star) const {
        double acc = 0.0;
        for (int i = 0; i <= n; ++i) {
            if (i > k_star) acc += weight(i);
        }
        return acc;
    }
};

// Bayes update against the Laplace observation kernel, entirely in log
// space: log w_i = log P[k=i] + log f(x | i) - log Z. At lambda = 1.5 and
// n = 100 the raw mixture terms span e^{+-150} and binomial coefficients
// reach ~1e29, so linear-space products are not an option.
inline PosteriorPmf posterior(const AvailabilityPrior& prior, const PrivacyParams& privacy,
                              double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("posterior: x must be finite");
    const int n = prior.n();
    std::vector<double> log_weights(static_cast<std::size_t>(n) + 1, kLogZero);
    for (int i = 0; i <= n; ++i) {
        const double lp = prior.log_pmf(i);
        if (is_log_zero(lp)) continue;
        log_weights[static_cast<std::size_t>(i)] =
            lp + laplace_log_density(privacy, static_cast<double>(i), x);
    }
    const double log_z = log_sum_exp(log_weights);
    // Unreachable for a valid prior and finite x: the Laplace density is
    // strictly positive everywhere.
    if (is_log_zero(log_z) || !std::isfinite(log_z)) {
        throw std::runtime_error("posterior: normalization lost all mass");
    }
    for (double& lw : log_weights) {
        if (!is_log_zero(lw)) lw -= log_z;
    }
    return PosteriorPmf{n, x, std::move(log_weights)};
}

}  // namespace privopt
