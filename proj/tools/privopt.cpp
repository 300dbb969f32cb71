// privopt command line: single quotes, price-curve CSV sweeps, Monte Carlo
// simulation runs, and self-verification of the pricing paths.
//
// Exit codes: 0 success, 1 verification failure, 2 usage/config error.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "privopt/format.hpp"
#include "privopt/laplace.hpp"
#include "privopt/logspace.hpp"
#include "privopt/posterior.hpp"
#include "privopt/pricing.hpp"
#include "privopt/prior.hpp"
#include "privopt/rng.hpp"
#include "privopt/simulate.hpp"

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr const char* kSeedEnvVar = "PRIVOPT_SEED";
constexpr std::uint64_t kDefaultSeed = 1;

// ---------------------------------------------------------------------------
// Config file
// ---------------------------------------------------------------------------

struct PriorConfig {
    std::string kind;
    int n = 0;
    std::optional<double> p;
};

struct SweepConfig {
    std::optional<double> x_min;
    std::optional<double> x_max;
    std::optional<double> x_step;
    std::vector<std::int64_t> k_star;
    std::vector<double> p;
};

struct ScenarioConfig {
    std::optional<PriorConfig> prior_true;
    std::optional<PriorConfig> prior_pricing;
    std::optional<double> lambda;
    std::optional<double> c_s;
    std::optional<double> c_p;
    std::optional<double> c_q;
    std::optional<std::int64_t> k_star;
    std::optional<std::uint64_t> replications;
    std::optional<std::uint64_t> seed;
    SweepConfig sweep;
};

void require_known_keys(const json& obj, const std::string& context,
                        std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* name : allowed) {
            if (item.key() == name) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw UsageError("config: unknown key '" + context + item.key() + "'");
        }
    }
}

double get_number(const json& obj, const std::string& context, const char* key) {
    const auto& v = obj.at(key);
    if (!v.is_number()) throw UsageError("config: '" + context + key + "' must be a number");
    return v.get<double>();
}

std::int64_t get_integer(const json& obj, const std::string& context, const char* key) {
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) {
        throw UsageError("config: '" + context + key + "' must be an integer");
    }
    return v.get<std::int64_t>();
}

PriorConfig parse_prior_config(const json& obj, const std::string& context) {
    if (!obj.is_object()) throw UsageError("config: '" + context + "' must be an object");
    require_known_keys(obj, context + ".", {"kind", "n", "p"});
    PriorConfig prior;
    if (!obj.contains("kind")) throw UsageError("config: missing key '" + context + ".kind'");
    if (!obj.contains("n")) throw UsageError("config: missing key '" + context + ".n'");
    prior.kind = obj.at("kind").get<std::string>();
    prior.n = static_cast<int>(get_integer(obj, context + ".", "n"));
    if (obj.contains("p")) prior.p = get_number(obj, context + ".", "p");
    if (prior.kind == "uniform") {
        if (prior.p) throw UsageError("config: '" + context + ".p' is not valid for uniform");
    } else if (prior.kind == "unit" || prior.kind == "binomial") {
        if (!prior.p) throw UsageError("config: missing key '" + context + ".p'");
    } else {
        throw UsageError("config: '" + context + ".kind' must be unit, binomial, or uniform");
    }
    return prior;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("config: cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError("config: " + std::string(e.what()));
    }
    if (!doc.is_object()) throw UsageError("config: document root must be an object");
    require_known_keys(doc, "", {"prior_true", "prior_pricing", "lambda", "costs", "k_star",
                                 "replications", "seed", "sweep"});

    ScenarioConfig config;
    if (doc.contains("prior_true")) {
        config.prior_true = parse_prior_config(doc.at("prior_true"), "prior_true");
    }
    if (doc.contains("prior_pricing")) {
        config.prior_pricing = parse_prior_config(doc.at("prior_pricing"), "prior_pricing");
    }
    if (doc.contains("lambda")) config.lambda = get_number(doc, "", "lambda");
    if (doc.contains("costs")) {
        const auto& costs = doc.at("costs");
        if (!costs.is_object()) throw UsageError("config: 'costs' must be an object");
        require_known_keys(costs, "costs.", {"c_s", "c_p", "c_q"});
        if (!costs.contains("c_s")) throw UsageError("config: missing key 'costs.c_s'");
        if (!costs.contains("c_p")) throw UsageError("config: missing key 'costs.c_p'");
        config.c_s = get_number(costs, "costs.", "c_s");
        config.c_p = get_number(costs, "costs.", "c_p");
        config.c_q = costs.contains("c_q") ? get_number(costs, "costs.", "c_q") : 0.0;
    }
    if (doc.contains("k_star")) config.k_star = get_integer(doc, "", "k_star");
    if (doc.contains("replications")) {
        const std::int64_t r = get_integer(doc, "", "replications");
        if (r < 1) throw UsageError("config: 'replications' must be >= 1");
        config.replications = static_cast<std::uint64_t>(r);
    }
    if (doc.contains("seed")) {
        config.seed = static_cast<std::uint64_t>(get_integer(doc, "", "seed"));
    }
    if (doc.contains("sweep")) {
        const auto& sweep = doc.at("sweep");
        if (!sweep.is_object()) throw UsageError("config: 'sweep' must be an object");
        require_known_keys(sweep, "sweep.", {"x_min", "x_max", "x_step", "k_star", "p"});
        if (sweep.contains("x_min")) config.sweep.x_min = get_number(sweep, "sweep.", "x_min");
        if (sweep.contains("x_max")) config.sweep.x_max = get_number(sweep, "sweep.", "x_max");
        if (sweep.contains("x_step")) config.sweep.x_step = get_number(sweep, "sweep.", "x_step");
        if (sweep.contains("k_star")) {
            for (const auto& v : sweep.at("k_star")) {
                if (!v.is_number_integer()) {
                    throw UsageError("config: 'sweep.k_star' must hold integers");
                }
                config.sweep.k_star.push_back(v.get<std::int64_t>());
            }
        }
        if (sweep.contains("p")) {
            for (const auto& v : sweep.at("p")) {
                if (!v.is_number()) throw UsageError("config: 'sweep.p' must hold numbers");
                config.sweep.p.push_back(v.get<double>());
            }
        }
    }
    return config;
}

privopt::AvailabilityPrior make_prior(const PriorConfig& config) {
    if (config.kind == "unit") return privopt::AvailabilityPrior::unit_correlation(config.n, *config.p);
    if (config.kind == "binomial") return privopt::AvailabilityPrior::binomial(config.n, *config.p);
    return privopt::AvailabilityPrior::uniform(config.n);
}

std::optional<std::uint64_t> seed_from_environment() {
    const char* raw = std::getenv(kSeedEnvVar);
    if (raw == nullptr || *raw == '\0') return std::nullopt;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(raw, &end, 10);
    if (end == raw || *end != '\0') {
        throw UsageError(std::string(kSeedEnvVar) + ": invalid seed '" + raw + "'");
    }
    return static_cast<std::uint64_t>(v);
}

// Flags beat config, config beats the environment, then the built-in default.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag,
                           const std::optional<std::uint64_t>& config) {
    if (flag) return *flag;
    if (config) return *config;
    if (const auto env = seed_from_environment()) return *env;
    return kDefaultSeed;
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw UsageError("cannot open output file '" + out_path + "'");
    out << text;
}

// ---------------------------------------------------------------------------
// quote
// ---------------------------------------------------------------------------

struct QuoteArgs {
    std::string model;
    std::optional<int> n;
    std::optional<double> p;
    double lambda = 0.0;
    std::int64_t k_star = 0;
    double x = 0.0;
    double c_s = 1.0;
};

privopt::MarketCosts quote_costs(double c_s) {
    // c_p and c_q never enter the premium; pick any legal values.
    return privopt::MarketCosts(c_s, 2.0 * c_s, 0.0);
}

privopt::AvailabilityPrior prior_from_flags(const std::string& model, const std::optional<int>& n,
                                            const std::optional<double>& p) {
    if (!n) throw UsageError("--n is required for model '" + model + "'");
    if (model == "uniform") {
        if (p) throw UsageError("--p is not valid for model 'uniform'");
        return privopt::AvailabilityPrior::uniform(*n);
    }
    if (!p) throw UsageError("--p is required for model '" + model + "'");
    if (model == "unit") return privopt::AvailabilityPrior::unit_correlation(*n, *p);
    if (model == "binomial") return privopt::AvailabilityPrior::binomial(*n, *p);
    throw UsageError("unknown model '" + model + "'");
}

int run_quote(const QuoteArgs& args) {
    const privopt::PrivacyParams privacy(args.lambda);
    const privopt::Demand demand(args.k_star);
    const privopt::MarketCosts costs = quote_costs(args.c_s);

    privopt::OptionQuote quote;
    if (args.model == "prior-free") {
        if (args.n || args.p) {
            throw UsageError("--n/--p are not valid for model 'prior-free'");
        }
        quote = privopt::price_prior_free(costs, privacy, demand, args.x);
        std::cout << "premium=" << privopt::format_double(quote.premium, 12) << "\n";
        return 0;
    }
    const privopt::AvailabilityPrior prior = prior_from_flags(args.model, args.n, args.p);
    quote = privopt::price(costs, privacy, prior, demand, args.x);
    std::cout << "premium=" << privopt::format_double(quote.premium, 12)
              << " normalized=" << privopt::format_double(quote.normalized, 12)
              << " posterior_mean=" << privopt::format_double(quote.posterior_mean, 12)
              << " tail_probability=" << privopt::format_double(quote.tail_probability, 12) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// curve
// ---------------------------------------------------------------------------

struct CurveArgs {
    std::string config_path;
    std::string model;
    std::optional<int> n;
    std::vector<double> p_list;
    std::optional<double> lambda;
    std::vector<std::int64_t> k_star_list;
    std::string x_spec;
    std::optional<double> c_s;
    std::string out_path;
};

struct Sweep {
    double min = 0.0;
    double max = 0.0;
    double step = 1.0;
};

Sweep parse_sweep_spec(const std::string& spec) {
    Sweep sweep;
    const auto first = spec.find(':');
    try {
        if (first == std::string::npos) {
            sweep.min = sweep.max = privopt::parse_double(spec);
            sweep.step = 1.0;
            return sweep;
        }
        const auto second = spec.find(':', first + 1);
        if (second == std::string::npos) throw UsageError("--x expects 'min:max:step' or a number");
        sweep.min = privopt::parse_double(spec.substr(0, first));
        sweep.max = privopt::parse_double(spec.substr(first + 1, second - first - 1));
        sweep.step = privopt::parse_double(spec.substr(second + 1));
    } catch (const std::invalid_argument&) {
        throw UsageError("--x: cannot parse sweep '" + spec + "'");
    }
    return sweep;
}

int run_curve(const CurveArgs& args) {
    ScenarioConfig config;
    if (!args.config_path.empty()) config = load_config(args.config_path);

    std::string model = args.model;
    std::optional<int> n = args.n;
    std::optional<double> lambda = args.lambda;
    std::vector<std::int64_t> k_list = args.k_star_list;
    std::vector<double> p_list = args.p_list;

    if (model.empty() && config.prior_pricing) model = config.prior_pricing->kind;
    if (!n && config.prior_pricing) n = config.prior_pricing->n;
    if (!lambda && config.lambda) lambda = config.lambda;
    if (k_list.empty()) {
        if (!config.sweep.k_star.empty()) {
            k_list = config.sweep.k_star;
        } else if (config.k_star) {
            k_list.push_back(*config.k_star);
        }
    }
    if (p_list.empty()) {
        if (!config.sweep.p.empty()) {
            p_list = config.sweep.p;
        } else if (config.prior_pricing && config.prior_pricing->p) {
            p_list.push_back(*config.prior_pricing->p);
        }
    }
    const double c_s = args.c_s ? *args.c_s : config.c_s.value_or(1.0);

    if (model.empty()) throw UsageError("curve: --model (or a config prior_pricing) is required");
    if (!lambda) throw UsageError("curve: --lambda is required");
    if (!n) throw UsageError("curve: --n is required");
    if (k_list.empty()) throw UsageError("curve: at least one --k-star value is required");

    const bool model_takes_p = model == "unit" || model == "binomial";
    if (!model_takes_p && !p_list.empty()) {
        throw UsageError("curve: --p is not valid for model '" + model + "'");
    }
    if (model_takes_p && p_list.empty()) {
        throw UsageError("curve: --p is required for model '" + model + "'");
    }

    Sweep sweep;
    if (!args.x_spec.empty()) {
        sweep = parse_sweep_spec(args.x_spec);
    } else if (config.sweep.x_min && config.sweep.x_max) {
        sweep.min = *config.sweep.x_min;
        sweep.max = *config.sweep.x_max;
        sweep.step = config.sweep.x_step.value_or(1.0);
    } else {
        throw UsageError("curve: an --x sweep (or config sweep.x_min/x_max) is required");
    }
    if (!(sweep.step > 0.0) || !std::isfinite(sweep.step) || !std::isfinite(sweep.min) ||
        !std::isfinite(sweep.max) || sweep.min > sweep.max) {
        throw UsageError("curve: empty sweep");
    }

    const privopt::PrivacyParams privacy(*lambda);
    const privopt::MarketCosts costs = quote_costs(c_s);

    struct Column {
        std::string label;
        std::optional<privopt::AvailabilityPrior> prior;  // empty for prior-free
        privopt::Demand demand;
    };
    std::vector<Column> columns;
    const std::vector<double> effective_p = model_takes_p ? p_list : std::vector<double>{0.0};
    for (const std::int64_t k_star : k_list) {
        for (const double p : effective_p) {
            std::string label;
            if (k_list.size() > 1) label += "kstar=" + std::to_string(k_star);
            if (model_takes_p && p_list.size() > 1) {
                if (!label.empty()) label += ';';
                label += "p=" + privopt::format_double(p);
            }
            if (label.empty()) label = "price";
            std::optional<privopt::AvailabilityPrior> prior;
            if (model != "prior-free") prior = prior_from_flags(model, n, model_takes_p ? std::optional<double>(p) : std::nullopt);
            columns.push_back(Column{label, prior, privopt::Demand(k_star)});
        }
    }

    std::string csv = "x";
    for (const Column& column : columns) csv += "," + column.label;
    csv += "\n";

    const double slack = sweep.step * 1e-9;
    for (std::int64_t i = 0;; ++i) {
        const double x = sweep.min + static_cast<double>(i) * sweep.step;
        if (x > sweep.max + slack) break;
        csv += privopt::format_double(x);
        for (const Column& column : columns) {
            double normalized;
            if (column.prior) {
                normalized = privopt::price(costs, privacy, *column.prior, column.demand, x).normalized;
            } else {
                const auto quote = privopt::price_prior_free(costs, privacy, column.demand, x);
                normalized = quote.premium / (costs.c_s * static_cast<double>(*n));
            }
            csv += "," + privopt::format_double(normalized);
        }
        csv += "\n";
    }

    write_output(csv, args.out_path);
    return 0;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> replications;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> k_star;
    std::optional<double> lambda;
};

int run_simulate(const SimulateArgs& args) {
    const ScenarioConfig config = load_config(args.config_path);

    if (!config.prior_true) throw UsageError("config: missing key 'prior_true'");
    if (!config.prior_pricing) throw UsageError("config: missing key 'prior_pricing'");
    if (!config.c_s) throw UsageError("config: missing key 'costs'");
    const double lambda = args.lambda ? *args.lambda : config.lambda.value_or(0.0);
    if (!(lambda > 0.0)) throw UsageError("config: missing key 'lambda'");
    if (!args.k_star && !config.k_star) throw UsageError("config: missing key 'k_star'");
    if (!args.replications && !config.replications) {
        throw UsageError("config: missing key 'replications'");
    }

    const privopt::Scenario scenario(
        make_prior(*config.prior_true), make_prior(*config.prior_pricing),
        privopt::PrivacyParams(lambda), privopt::MarketCosts(*config.c_s, *config.c_p, *config.c_q),
        privopt::Demand(args.k_star ? *args.k_star : *config.k_star),
        args.replications ? *args.replications : *config.replications,
        resolve_seed(args.seed, config.seed));

    const privopt::SimulationReport report = privopt::run(scenario);

    std::string csv = "metric,value,stderr,count\n";
    const auto row = [&csv](const char* name, const privopt::MetricSummary& m) {
        csv += std::string(name) + "," + privopt::format_double(m.mean) + "," +
               privopt::format_double(m.std_error) + "," + std::to_string(m.count) + "\n";
    };
    row("premium", report.premium);
    row("excess_cost", report.excess_cost);
    row("transfer_gap", report.transfer_gap);
    row("total_cost", report.total_cost);
    static const char* kQuantileNames[] = {"transfer_gap_q05", "transfer_gap_q25",
                                           "transfer_gap_q50", "transfer_gap_q75",
                                           "transfer_gap_q95"};
    for (std::size_t i = 0; i < report.transfer_gap_quantiles.size(); ++i) {
        csv += std::string(kQuantileNames[i]) + "," +
               privopt::format_double(report.transfer_gap_quantiles[i]) + ",," +
               std::to_string(report.replications) + "\n";
    }
    write_output(csv, args.out_path);

    std::cerr << "simulated " << report.replications << " episodes: premium mean "
              << privopt::format_double(report.premium.mean, 6) << ", transfer gap "
              << privopt::format_double(report.transfer_gap.mean, 6) << " (se "
              << privopt::format_double(report.transfer_gap.std_error, 6) << ")\n";
    return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyArgs {
    int instances = 200;
    std::optional<std::uint64_t> seed;
    bool inject_fault = false;
};

struct VerifyInstance {
    int n;
    double p;
    double lambda;
    std::int64_t k_star;
    double x;

    std::string describe() const {
        return "n=" + std::to_string(n) + " p=" + privopt::format_double(p) +
               " lambda=" + privopt::format_double(lambda) + " kstar=" + std::to_string(k_star) +
               " x=" + privopt::format_double(x);
    }
};

VerifyInstance draw_instance(privopt::SplitMix64& rng) {
    VerifyInstance inst;
    inst.n = 1 + static_cast<int>(rng.next_unit() * 200.0);
    const double u = rng.next_unit();
    inst.p = u < 0.03 ? 0.0 : (u > 0.97 ? 1.0 : rng.next_unit());
    inst.lambda = 0.05 + rng.next_unit() * 2.45;
    inst.k_star = static_cast<std::int64_t>(rng.next_unit() * static_cast<double>(inst.n + 3));
    inst.x = -0.5 * inst.n - 3.0 + rng.next_unit() * (2.0 * inst.n + 6.0);
    return inst;
}

double relative_gap(double a, double b) {
    const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
    if (scale < 1e-290) return 0.0;
    return std::fabs(a - b) / scale;
}

int run_verify(const VerifyArgs& args) {
    if (args.instances < 1) throw UsageError("verify: --instances must be >= 1");
    const std::uint64_t seed = resolve_seed(args.seed, std::nullopt);

    struct Check {
        const char* name;
        bool passed = true;
        std::string failure;
    };
    Check checks[] = {{"posterior_normalization", true, {}},
                      {"unit_closed_form", true, {}},
                      {"binomial_endpoints", true, {}},
                      {"model_wrappers", true, {}},
                      {"premium_bounds", true, {}}};
    auto fail = [](Check& check, const VerifyInstance& inst, double gap) {
        if (!check.passed) return;
        check.passed = false;
        check.failure = inst.describe() + " gap=" + privopt::format_double(gap, 6);
    };

    privopt::SplitMix64 rng(privopt::derive_stream_seed(seed, 0));
    for (int i = 0; i < args.instances; ++i) {
        const VerifyInstance inst = draw_instance(rng);
        const privopt::PrivacyParams privacy(inst.lambda);
        const privopt::MarketCosts costs(1.0, 2.0, 0.0);
        const privopt::Demand demand(inst.k_star);

        const auto unit = privopt::AvailabilityPrior::unit_correlation(inst.n, inst.p);
        const auto binom = privopt::AvailabilityPrior::binomial(inst.n, inst.p);
        const auto uniform = privopt::AvailabilityPrior::uniform(inst.n);

        for (const auto& prior : {unit, binom, uniform}) {
            const auto post = privopt::posterior(prior, privacy, inst.x);
            const double residual = privopt::log_sum_exp(post.log_weights);
            if (std::fabs(residual) > 1e-10) fail(checks[0], inst, residual);

            const auto quote = privopt::price(costs, privacy, prior, demand, inst.x);
            const double cap =
                static_cast<double>(std::max<std::int64_t>(0, prior.n() - demand.k_star));
            if (quote.premium < 0.0 || quote.premium > cap * (1.0 + 1e-12) + 1e-300) {
                fail(checks[4], inst, quote.premium - cap);
            }
        }

        const double generic_unit = privopt::price(costs, privacy, unit, demand, inst.x).premium;
        const double closed_x = args.inject_fault ? -inst.x : inst.x;  // self-test hook
        const double closed_unit =
            privopt::price_unit_correlation(costs, privacy, unit, demand, closed_x).premium;
        if (relative_gap(generic_unit, closed_unit) > 1e-10) {
            fail(checks[1], inst, relative_gap(generic_unit, closed_unit));
        }

        const auto endpoints = privopt::price_binomial_endpoints(costs, privacy, binom, demand);
        const double at_zero = privopt::price(costs, privacy, binom, demand, 0.0).premium;
        const double at_n =
            privopt::price(costs, privacy, binom, demand, static_cast<double>(inst.n)).premium;
        const double gap_min = relative_gap(endpoints.min_price, at_zero);
        const double gap_max = relative_gap(endpoints.max_price, at_n);
        if (gap_min > 1e-10 || gap_max > 1e-10) {
            fail(checks[2], inst, std::max(gap_min, gap_max));
        }

        const double wrapper_binom =
            privopt::price_binomial(costs, privacy, binom, demand, inst.x).premium;
        const double wrapper_uniform =
            privopt::price_uniform(costs, privacy, uniform, demand, inst.x).premium;
        const double generic_binom = privopt::price(costs, privacy, binom, demand, inst.x).premium;
        const double generic_uniform =
            privopt::price(costs, privacy, uniform, demand, inst.x).premium;
        if (relative_gap(wrapper_binom, generic_binom) > 1e-12 ||
            relative_gap(wrapper_uniform, generic_uniform) > 1e-12) {
            fail(checks[3], inst,
                 std::max(relative_gap(wrapper_binom, generic_binom),
                          relative_gap(wrapper_uniform, generic_uniform)));
        }
    }

    bool all_passed = true;
    for (const Check& check : checks) {
        if (check.passed) {
            std::cout << "PASS " << check.name << " (" << args.instances << " instances)\n";
        } else {
            all_passed = false;
            std::cout << "FAIL " << check.name << " " << check.failure << "\n";
        }
    }
    return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Option pricing for a privacy-aware supply market"};
    app.require_subcommand(1);

    QuoteArgs quote_args;
    auto* quote = app.add_subcommand("quote", "Price a single option quote");
    quote->add_option("--model", quote_args.model, "prior-free, unit, binomial, or uniform")
        ->required();
    quote->add_option("--n", quote_args.n, "number of suppliers");
    quote->add_option("--p", quote_args.p, "availability probability");
    quote->add_option("--lambda", quote_args.lambda, "Laplace noise rate")->required();
    quote->add_option("--k-star", quote_args.k_star, "demanded items")->required();
    quote->add_option("--x", quote_args.x, "declared availability")->required();
    quote->add_option("--c-s", quote_args.c_s, "supplier unit price")->default_val(1.0);

    CurveArgs curve_args;
    auto* curve = app.add_subcommand("curve", "Sweep declared availability, emit CSV");
    curve->add_option("--config", curve_args.config_path, "JSON config supplying defaults");
    curve->add_option("--model", curve_args.model, "prior-free, unit, binomial, or uniform");
    curve->add_option("--n", curve_args.n, "number of suppliers");
    curve->add_option("--p", curve_args.p_list, "availability probabilities (comma separated)")
        ->delimiter(',');
    curve->add_option("--lambda", curve_args.lambda, "Laplace noise rate");
    curve->add_option("--k-star", curve_args.k_star_list, "demand values (comma separated)")
        ->delimiter(',');
    curve->add_option("--x", curve_args.x_spec, "sweep as min:max:step (inclusive) or one value");
    curve->add_option("--c-s", curve_args.c_s, "supplier unit price (default 1)");
    curve->add_option("--out", curve_args.out_path, "write CSV here instead of stdout");

    SimulateArgs simulate_args;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo market simulation");
    simulate->add_option("config", simulate_args.config_path, "JSON scenario config")->required();
    simulate->add_option("--out", simulate_args.out_path, "write CSV here instead of stdout");
    simulate->add_option("--replications", simulate_args.replications, "override replications");
    simulate->add_option("--seed", simulate_args.seed, "override seed");
    simulate->add_option("--k-star", simulate_args.k_star, "override demand");
    simulate->add_option("--lambda", simulate_args.lambda, "override noise rate");

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "Cross-check pricing paths on random instances");
    verify->add_option("--instances", verify_args.instances, "instances per check")
        ->default_val(200);
    verify->add_option("--seed", verify_args.seed, "seed for the instance stream");
    verify->add_flag("--inject-fault", verify_args.inject_fault)->group("");  // harness self-test

    try {
        app.parse(argc, argv);
        if (quote->parsed()) return run_quote(quote_args);
        if (curve->parsed()) return run_curve(curve_args);
        if (simulate->parsed()) return run_simulate(simulate_args);
        if (verify->parsed()) return run_verify(verify_args);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
