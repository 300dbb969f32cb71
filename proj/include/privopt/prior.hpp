#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "privopt/logspace.hpp"
#include "privopt/rng.hpp"

namespace privopt {

enum class PriorKind { UnitCorrelation, Binomial, Uniform };

inline const char* to_string(PriorKind kind) {
    switch (kind) {
        case PriorKind::UnitCorrelation: return "unit";
        case PriorKind::Binomial: return "binomial";
        case PriorKind::Uniform: return "uniform";
    }
    return "?";
}

// A-priori model for the number of available items over {0, ..., n}:
//
//   UnitCorrelation  all n suppliers stock the item (probability p) or none
//                    do; a two-point prior on {0, n}.
//   Binomial         each supplier stocks it independently with probability
//                    p; Binomial(n, p) counts.
//   Uniform          1/(n+1) on every count; the uninformative choice.
//
// Degenerate p in {0, 1} is accepted: the prior (and therefore the posterior)
// simply collapses to a point mass. n = 0 gives the singleton support {0}.
class AvailabilityPrior {
public:
    static AvailabilityPrior unit_correlation(int n, double p) {
        return AvailabilityPrior(PriorKind::UnitCorrelation, n, p);
    }
    static AvailabilityPrior binomial(int n, double p) {
        return AvailabilityPrior(PriorKind::Binomial, n, p);
    }
    static AvailabilityPrior uniform(int n) { return AvailabilityPrior(PriorKind::Uniform, n, 0.0); }

    PriorKind kind() const { return kind_; }
    int n() const { return n_; }
    // Meaningful for UnitCorrelation and Binomial only.
    double p() const { return p_; }

    // ln P[k = i]. Impossible points return the kLogZero sentinel. Binomial
    // terms go through log-gamma, never raw factorials.
    double log_pmf(int i) const {
        if (i < 0 || i > n_) {
            throw std::out_of_range("AvailabilityPrior::log_pmf: i outside {0..n}");
        }
        switch (kind_) {
            case PriorKind::UnitCorrelation:
                if (n_ == 0) return 0.0;
                if (i == 0) return p_ < 1.0 ? std::log1p(-p_) : kLogZero;
                if (i == n_) return p_ > 0.0 ? std::log(p_) : kLogZero;
                return kLogZero;
            case PriorKind::Binomial:
                if (p_ == 0.0) return i == 0 ? 0.0 : kLogZero;
                if (p_ == 1.0) return i == n_ ? 0.0 : kLogZero;
                return log_choose(n_, i) + i * std::log(p_) + (n_ - i) * std::log1p(-p_);
            case PriorKind::Uniform:
                return -std::log(static_cast<double>(n_) + 1.0);
        }
        return kLogZero;
    }

    // Draw one availability count. UnitCorrelation consumes one Bernoulli(p)
    // variate, Binomial consumes n of them, Uniform one uniform variate.
    int sample(SplitMix64& rng) const {
        switch (kind_) {
            case PriorKind::UnitCorrelation:
                return rng.next_unit() < p_ ? n_ : 0;
            case PriorKind::Binomial: {
                int count = 0;
                for (int i = 0; i < n_; ++i) {
                    if (rng.next_unit() < p_) ++count;
                }
                return count;
            }
            case PriorKind::Uniform: {
                const int i = static_cast<int>(rng.next_unit() * (static_cast<double>(n_) + 1.0));
                return i > n_ ? n_ : i;
            }
        }
        return 0;
    }

private:
    AvailabilityPrior(PriorKind kind, int n, double p) : kind_(kind), n_(n), p_(p) {
        if (n < 0 || n > kMaxSupport) {
            throw std::invalid_argument("AvailabilityPrior: n must lie in [0, " +
                                        std::to_string(kMaxSupport) + "]");
        }
        if (kind != PriorKind::Uniform && !(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("AvailabilityPrior: p must lie in [0, 1]");
        }
    }

    // Posteriors materialize n + 1 weights, so keep supports bounded.
    static constexpr int kMaxSupport = 100000;

    PriorKind kind_;
    int n_;
    double p_;
};

}  // namespace privopt
