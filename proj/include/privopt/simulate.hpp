#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "privopt/laplace.hpp"
#include "privopt/pricing.hpp"
#include "privopt/prior.hpp"
#include "privopt/rng.hpp"

namespace privopt {

// One simulated market configuration. prior_true generates the real
// availability; prior_pricing is what the broker quotes with. Keeping them
// separate turns prior misspecification into a measurable statistic.
struct Scenario {
    AvailabilityPrior prior_true;
    AvailabilityPrior prior_pricing;
    PrivacyParams privacy;
    MarketCosts costs;
    Demand demand;
    std::uint64_t replications;
    std::uint64_t seed;

    Scenario(AvailabilityPrior truth, AvailabilityPrior pricing_model, PrivacyParams privacy_,
             MarketCosts costs_, Demand demand_, std::uint64_t replications_, std::uint64_t seed_)
        : prior_true(truth),
          prior_pricing(pricing_model),
          privacy(privacy_),
          costs(costs_),
          demand(demand_),
          replications(replications_),
          seed(seed_) {
        if (replications < 1) throw std::invalid_argument("Scenario: replications must be >= 1");
        if (prior_true.n() != prior_pricing.n()) {
            throw std::invalid_argument("Scenario: priors must share the same n");
        }
    }
};

// One market round. The broker buys all k available items at c_s, produces
// any shortfall at c_p, and has already paid the query fee c_q; the option
// premium covers the excess purchase c_s (k - k*)^+.
struct EpisodeLedger {
    std::int64_t true_k = 0;
    double declared_x = 0.0;
    double premium = 0.0;
    double procurement_cost = 0.0;  // c_s * true_k
    double production_cost = 0.0;   // c_p * (k* - true_k)^+
    double query_cost = 0.0;        // c_q
    double excess_cost = 0.0;       // c_s * (true_k - k*)^+
    double transfer_gap = 0.0;      // premium - excess_cost

    double total_cost() const { return query_cost + procurement_cost + production_cost; }
};

struct MetricSummary {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t count = 0;
};

struct SimulationReport {
    MetricSummary premium;
    MetricSummary excess_cost;
    MetricSummary transfer_gap;
    MetricSummary total_cost;
    // 5/25/50/75/95% of transfer_gap, linear interpolation on the sorted
    // sample (type-7 quantiles).
    std::array<double, 5> transfer_gap_quantiles{};
    std::uint64_t replications = 0;
};

inline constexpr std::array<double, 5> kReportQuantiles = {0.05, 0.25, 0.50, 0.75, 0.95};

namespace detail {

// Fixed-tree pairwise sum: deterministic for a given index order regardless
// of how the values were produced.
inline double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double acc = 0.0;
        for (double v : values) acc += v;
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

inline MetricSummary summarize(std::span<const double> values) {
    MetricSummary summary;
    summary.count = values.size();
    summary.mean = pairwise_sum(values) / static_cast<double>(values.size());
    if (values.size() > 1) {
        std::vector<double> squared(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double d = values[i] - summary.mean;
            squared[i] = d * d;
        }
        const double variance = pairwise_sum(squared) / static_cast<double>(values.size() - 1);
        summary.std_error = std::sqrt(variance / static_cast<double>(values.size()));
    }
    return summary;
}

inline double quantile_sorted(std::span<const double> sorted, double q) {
    const double h = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace detail

inline EpisodeLedger run_episode(const Scenario& scenario, SplitMix64& rng) {
    const std::int64_t k = scenario.prior_true.sample(rng);
    const Declaration declared = sample_declaration(scenario.privacy, k, rng);
    const OptionQuote quote =
        price(scenario.costs, scenario.privacy, scenario.prior_pricing, scenario.demand,
              declared.value);

    const std::int64_t k_star = scenario.demand.k_star;
    EpisodeLedger ledger;
    ledger.true_k = k;
    ledger.declared_x = declared.value;
    ledger.premium = quote.premium;
    ledger.procurement_cost = scenario.costs.c_s * static_cast<double>(k);
    ledger.production_cost =
        scenario.costs.c_p * static_cast<double>(std::max<std::int64_t>(0, k_star - k));
    ledger.query_cost = scenario.costs.c_q;
    ledger.excess_cost = scenario.costs.c_s * static_cast<double>(std::max<std::int64_t>(0, k - k_star));
    ledger.transfer_gap = ledger.premium - ledger.excess_cost;
    return ledger;
}

// Runs `replications` episodes, each on its own counter-derived RNG stream,
// and aggregates. Identical scenarios (seed included) produce bit-identical
// reports; episode order cannot matter because every reduction is a fixed
// pairwise tree over the episode index.
inline SimulationReport run(const Scenario& scenario) {
    const std::size_t count = static_cast<std::size_t>(scenario.replications);
    std::vector<double> premium(count);
    std::vector<double> excess(count);
    std::vector<double> gap(count);
    std::vector<double> total(count);

    for (std::size_t i = 0; i < count; ++i) {
        SplitMix64 rng(derive_stream_seed(scenario.seed, i));
        const EpisodeLedger ledger = run_episode(scenario, rng);
        premium[i] = ledger.premium;
        excess[i] = ledger.excess_cost;
        gap[i] = ledger.transfer_gap;
        total[i] = ledger.total_cost();
    }

    SimulationReport report;
    report.replications = scenario.replications;
    report.premium = detail::summarize(premium);
    report.excess_cost = detail::summarize(excess);
    report.transfer_gap = detail::summarize(gap);
    report.total_cost = detail::summarize(total);

    std::vector<double> sorted_gap = gap;
    std::sort(sorted_gap.begin(), sorted_gap.end());
    for (std::size_t i = 0; i < kReportQuantiles.size(); ++i) {
        report.transfer_gap_quantiles[i] = detail::quantile_sorted(sorted_gap, kReportQuantiles[i]);
    }
    return report;
}

}  // namespace privopt
