#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "privopt/laplace.hpp"
#include "privopt/logspace.hpp"
#include "privopt/posterior.hpp"
#include "privopt/prior.hpp"

namespace privopt {

// Broker-side unit economics. Only c_s enters the premium; c_p and c_q feed
// the simulator's cost accounting. c_s < c_p is the broker's whole reason to
// buy from obfuscated suppliers, so it is enforced.
struct MarketCosts {
    double c_s;
    double c_p;
    double c_q;

    MarketCosts(double supplier_price, double production_cost, double query_fee)
        : c_s(supplier_price), c_p(production_cost), c_q(query_fee) {
        if (!(std::isfinite(c_s) && c_s > 0.0)) {
            throw std::invalid_argument("MarketCosts: c_s must be finite and > 0");
        }
        if (!(std::isfinite(c_p) && c_p > 0.0)) {
            throw std::invalid_argument("MarketCosts: c_p must be finite and > 0");
        }
        if (!(c_s < c_p)) throw std::invalid_argument("MarketCosts: requires c_s < c_p");
        if (!(std::isfinite(c_q) && c_q >= 0.0)) {
            throw std::invalid_argument("MarketCosts: c_q must be finite and >= 0");
        }
    }
};

// Number of items the end customers demand. k_star > n is legal; every model
// then prices the option at 0.
struct Demand {
    std::int64_t k_star;

    explicit Demand(std::int64_t k) : k_star(k) {
        if (k < 0) throw std::invalid_argument("Demand: k_star must be >= 0");
    }
};

// A priced option. `normalized` is premium / (c_s * n); it is NaN for the
// prior-free quote (no n in that formula) and 0 for the degenerate n = 0
// support. Diagnostics carry the posterior mean and P[k > k_star]; they are
// NaN for the prior-free quote as well.
struct OptionQuote {
    double premium = 0.0;
    double normalized = 0.0;
    double x = 0.0;
    double posterior_mean = 0.0;
    double tail_probability = 0.0;
    std::optional<AvailabilityPrior> model;
};

struct BinomialEndpoints {
    double min_price = 0.0;
    double max_price = 0.0;
};

namespace detail {

// sum_{i > k_star} w_i (i - k_star), terms accumulated smallest to largest so
// the running sum never swamps the small contributions.
inline double expected_excess(const PosteriorPmf& post, std::int64_t k_star) {
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(post.n) + 1);
    for (int i = 0; i <= post.n; ++i) {
        if (i <= k_star) continue;
        const double lw = post.log_weights[static_cast<std::size_t>(i)];
        if (is_log_zero(lw)) continue;
        terms.push_back(std::exp(lw) * static_cast<double>(i - k_star));
    }
    std::sort(terms.begin(), terms.end());
    double acc = 0.0;
    for (double t : terms) acc += t;
    return acc;
}

inline double normalized_premium(double premium, double c_s, int n) {
    return n > 0 ? premium / (c_s * n) : 0.0;
}

inline OptionQuote quote_from_posterior(const MarketCosts& costs, const AvailabilityPrior& prior,
                                        const Demand& demand, const PosteriorPmf& post) {
    OptionQuote quote;
    quote.premium = costs.c_s * expected_excess(post, demand.k_star);
    quote.normalized = normalized_premium(quote.premium, costs.c_s, prior.n());
    quote.x = post.x;
    quote.posterior_mean = post.mean();
    quote.tail_probability = post.tail_probability(demand.k_star);
    quote.model = prior;
    return quote;
}

inline void require_kind(const AvailabilityPrior& prior, PriorKind kind, const char* where) {
    if (prior.kind() != kind) {
        throw std::invalid_argument(std::string(where) + ": prior kind mismatch");
    }
}

inline OptionQuote two_point_quote(const MarketCosts& costs, const AvailabilityPrior& prior,
                                   const Demand& demand, double x, double posterior_n) {
    const int n = prior.n();
    const std::int64_t surplus =
        std::max<std::int64_t>(0, static_cast<std::int64_t>(n) - demand.k_star);
    OptionQuote quote;
    quote.premium = costs.c_s * static_cast<double>(surplus) * posterior_n;
    quote.normalized = normalized_premium(quote.premium, costs.c_s, n);
    quote.x = x;
    quote.posterior_mean = static_cast<double>(n) * posterior_n;
    quote.tail_probability = demand.k_star < n ? posterior_n : 0.0;
    quote.model = prior;
    return quote;
}

}  // namespace detail

// Prior-free premium: c_s [ (x - k*)^+ + e^{-lambda |x - k*|} / (2 lambda) ].
// This treats the declaration itself as the best availability estimate; no
// model of the supplier pool enters.
inline OptionQuote price_prior_free(const MarketCosts& costs, const PrivacyParams& privacy,
                                    const Demand& demand, double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("price_prior_free: x must be finite");
    const double kc = static_cast<double>(demand.k_star);
    const double excess = std::max(0.0, x - kc);
    const double smoothing = std::exp(-privacy.lambda * std::fabs(x - kc)) / (2.0 * privacy.lambda);
    OptionQuote quote;
    quote.premium = costs.c_s * (excess + smoothing);
    quote.normalized = std::numeric_limits<double>::quiet_NaN();
    quote.x = x;
    quote.posterior_mean = std::numeric_limits<double>::quiet_NaN();
    quote.tail_probability = std::numeric_limits<double>::quiet_NaN();
    return quote;
}

// Two-point prior: premium = c_s (n - k*)^+ P[k = n | x]. The posterior is
// evaluated in the ratio-free form p L_n / (p L_n + (1-p) L_0), which stays
// finite for p in {0, 1} where the textbook (1-p)/p ratio blows up.
inline OptionQuote price_unit_correlation(const MarketCosts& costs, const PrivacyParams& privacy,
                                          const AvailabilityPrior& prior, const Demand& demand,
                                          double x) {
    detail::require_kind(prior, PriorKind::UnitCorrelation, "price_unit_correlation");
    if (!std::isfinite(x)) throw std::invalid_argument("price_unit_correlation: x must be finite");
    const int n = prior.n();
    const double p = prior.p();

    double posterior_n = 0.0;
    if (n == 0) {
        posterior_n = 1.0;  // the two support points coincide at k = 0
    } else if (p <= 0.0) {
        posterior_n = 0.0;
    } else if (p >= 1.0) {
        posterior_n = 1.0;
    } else {
        const double log_top = std::log(p) - privacy.lambda * std::fabs(n - x);
        const double log_bottom = std::log1p(-p) - privacy.lambda * std::fabs(x);
        posterior_n = std::exp(log_top - log_add(log_top, log_bottom));
    }
    return detail::two_point_quote(costs, prior, demand, x, posterior_n);
}

// Fast path of the two-point premium for declarations inside [0, n], where
// |x| - |n - x| collapses to 2x - n. Declarations outside that range must use
// price_unit_correlation, which this matches on the shared domain.
inline OptionQuote price_unit_correlation_in_range(const MarketCosts& costs,
                                                   const PrivacyParams& privacy,
                                                   const AvailabilityPrior& prior,
                                                   const Demand& demand, double x) {
    detail::require_kind(prior, PriorKind::UnitCorrelation, "price_unit_correlation_in_range");
    const int n = prior.n();
    if (!(x >= 0.0 && x <= static_cast<double>(n))) {
        throw std::invalid_argument("price_unit_correlation_in_range: x must lie in [0, n]");
    }
    const double p = prior.p();
    double posterior_n = 0.0;
    if (n == 0) {
        posterior_n = 1.0;
    } else if (p <= 0.0) {
        posterior_n = 0.0;
    } else if (p >= 1.0) {
        posterior_n = 1.0;
    } else {
        const double log_top = std::log(p) - privacy.lambda * (static_cast<double>(n) - x);
        const double log_bottom = std::log1p(-p) - privacy.lambda * x;
        posterior_n = std::exp(log_top - log_add(log_top, log_bottom));
    }
    return detail::two_point_quote(costs, prior, demand, x, posterior_n);
}

// Binomial prior: sum_{i > k*} (i - k*) posterior weights, weights from the
// posterior module.
inline OptionQuote price_binomial(const MarketCosts& costs, const PrivacyParams& privacy,
                                  const AvailabilityPrior& prior, const Demand& demand, double x) {
    detail::require_kind(prior, PriorKind::Binomial, "price_binomial");
    return detail::quote_from_posterior(costs, prior, demand, posterior(prior, privacy, x));
}

// Limits of the binomial premium as the declaration runs far below 0 or far
// above n: the observation kernels collapse to e^{-lambda i} and e^{+lambda i}
// and x drops out. Evaluated in log space as ratios of log-sum-exps.
inline BinomialEndpoints price_binomial_endpoints(const MarketCosts& costs,
                                                  const PrivacyParams& privacy,
                                                  const AvailabilityPrior& prior,
                                                  const Demand& demand) {
    detail::require_kind(prior, PriorKind::Binomial, "price_binomial_endpoints");
    const int n = prior.n();

    const auto tilted = [&](double sign) {
        double log_num = kLogZero;
        double log_den = kLogZero;
        for (int i = 0; i <= n; ++i) {
            const double lp = prior.log_pmf(i);
            if (is_log_zero(lp)) continue;
            const double tilt = lp + sign * privacy.lambda * static_cast<double>(i);
            log_den = log_add(log_den, tilt);
            if (i > demand.k_star) {
                log_num = log_add(log_num, tilt + std::log(static_cast<double>(i - demand.k_star)));
            }
        }
        if (is_log_zero(log_num)) return 0.0;
        return costs.c_s * std::exp(log_num - log_den);
    };

    return BinomialEndpoints{tilted(-1.0), tilted(+1.0)};
}

// Uniform prior: the prior cancels and the posterior is the bare normalized
// observation kernel. Same code path as the binomial case.
inline OptionQuote price_uniform(const MarketCosts& costs, const PrivacyParams& privacy,
                                 const AvailabilityPrior& prior, const Demand& demand, double x) {
    detail::require_kind(prior, PriorKind::Uniform, "price_uniform");
    return detail::quote_from_posterior(costs, prior, demand, posterior(prior, privacy, x));
}

// Piecewise-linear approximation of the uniform-prior premium: c_s (x - k*)^+,
// a knee at x = k*. Good away from the knee and the support edges.
inline double uniform_knee_approximation(const MarketCosts& costs, int n, const Demand& demand,
                                         double x) {
    if (n < 0) throw std::invalid_argument("uniform_knee_approximation: n must be >= 0");
    return costs.c_s * std::max(0.0, x - static_cast<double>(demand.k_star));
}

// Canonical pricing path for every availability model: posterior-weighted
// expected excess. The model-specific closed forms above are cross-checks
// against this path, not substitutes for it.
inline OptionQuote price(const MarketCosts& costs, const PrivacyParams& privacy,
                         const AvailabilityPrior& prior, const Demand& demand, double x) {
    switch (prior.kind()) {
        case PriorKind::UnitCorrelation:
        case PriorKind::Binomial:
        case PriorKind::Uniform:
            return detail::quote_from_posterior(costs, prior, demand, posterior(prior, privacy, x));
    }
    throw std::invalid_argument("price: unsupported prior kind");
}

}  // namespace privopt
