#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "golden.hpp"
#include "privopt/format.hpp"
#include "stats.hpp"

namespace {

namespace fs = std::filesystem;

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("privopt_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void spit(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    const fs::path out_path = scratch_dir() / "stdout.txt";
    const fs::path err_path = scratch_dir() / "stderr.txt";
    std::string command = env_prefix;
    if (!command.empty()) command += " ";
    command += "\"" PRIVOPT_CLI_PATH "\" " + args + " > \"" + out_path.string() + "\" 2> \"" +
               err_path.string() + "\"";
    const int status = std::system(command.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    return result;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, sep)) parts.push_back(token);
    return parts;
}

// Pulls `key=value` out of the quote output line.
double quoted_value(const std::string& line, const std::string& key) {
    const auto pos = line.find(key + "=");
    REQUIRE(pos != std::string::npos);
    const auto start = pos + key.size() + 1;
    auto end = line.find(' ', start);
    if (end == std::string::npos) end = line.find('\n', start);
    return std::stod(line.substr(start, end - start));
}

// metric -> value from the simulate CSV.
double report_value(const std::string& csv, const std::string& metric, int column = 1) {
    for (const std::string& line : split(csv, '\n')) {
        const auto fields = split(line, ',');
        if (!fields.empty() && fields[0] == metric) return std::stod(fields[column]);
    }
    FAIL("metric not found: ", metric);
    return 0.0;
}

const std::string kMatchedConfig = R"({
  "prior_true": {"kind": "binomial", "n": 100, "p": 0.5},
  "prior_pricing": {"kind": "binomial", "n": 100, "p": 0.5},
  "lambda": 1.5,
  "costs": {"c_s": 1.0, "c_p": 2.0, "c_q": 0.1},
  "k_star": 50,
  "replications": 20000,
  "seed": 7
})";

}  // namespace

TEST_SUITE("cli") {

    TEST_CASE("quote prints the two-point turning point premium") {
        const auto result =
            run_cli("quote --model unit --n 100 --p 0.5 --lambda 1.5 --k-star 20 --x 50 --c-s 1");
        CHECK(result.exit_code == 0);
        CHECK(quoted_value(result.out, "premium") == doctest::Approx(40.0).epsilon(1e-12));
        CHECK(quoted_value(result.out, "normalized") == doctest::Approx(0.4).epsilon(1e-12));
    }

    TEST_CASE("quote prints the prior-free value with 12 significant digits") {
        const auto result = run_cli("quote --model prior-free --lambda 1.5 --k-star 50 --x 50");
        CHECK(result.exit_code == 0);
        CHECK(result.out.find("premium=0.333333333333") != std::string::npos);
    }

    TEST_CASE("quote matches the frozen uniform reference") {
        const auto result =
            run_cli("quote --model uniform --n 100 --lambda 1.5 --k-star 50 --x 75");
        CHECK(result.exit_code == 0);
        CHECK(teststats::rel_diff(quoted_value(result.out, "premium"),
                                  golden::kUniformPremiumAtX75) < 1e-10);
    }

    TEST_CASE("quote rejects invalid flag combinations with exit 2") {
        CHECK(run_cli("quote --model uniform --n 100 --p 0.5 --lambda 1.5 --k-star 5 --x 3")
                  .exit_code == 2);
        CHECK(run_cli("quote --model unit --p 0.5 --lambda 1.5 --k-star 5 --x 3").exit_code == 2);
        CHECK(run_cli("quote --model unit --n 10 --lambda 1.5 --k-star 5 --x 3").exit_code == 2);
        CHECK(run_cli("quote --model prior-free --n 10 --lambda 1.5 --k-star 5 --x 3").exit_code ==
              2);
        CHECK(run_cli("quote --model martingale --n 10 --p 0.5 --lambda 1.5 --k-star 5 --x 3")
                  .exit_code == 2);
        CHECK(run_cli("quote --model unit --n 10 --p 0.5 --lambda -2 --k-star 5 --x 3").exit_code ==
              2);
        const auto bad_flag = run_cli("quote --frobnicate 3");
        CHECK(bad_flag.exit_code == 2);
        CHECK_FALSE(bad_flag.err.empty());
    }

    TEST_CASE("curve reproduces the two-point price steps") {
        const std::string args =
            "curve --model unit --n 100 --p 0.5 --lambda 1.5 --k-star 20,50,80 --x 0:100:1";
        const auto result = run_cli(args);
        CHECK(result.exit_code == 0);

        const auto lines = split(result.out, '\n');
        REQUIRE(lines.size() == 102);  // header + 101 rows
        CHECK(lines[0] == "x,kstar=20,kstar=50,kstar=80");

        const auto first = split(lines[1], ',');
        const auto last = split(lines[101], ',');
        REQUIRE(first.size() == 4);
        CHECK(std::stod(first[0]) == 0.0);
        CHECK(std::stod(last[0]) == 100.0);
        const double plateaus[] = {0.8, 0.5, 0.2};
        for (int c = 1; c <= 3; ++c) {
            CHECK(std::stod(first[c]) < 1e-3);
            CHECK(std::fabs(std::stod(last[c]) - plateaus[c - 1]) < 1e-3);
        }

        // the transition sits at the half-way declaration
        const auto mid = split(lines[51], ',');
        CHECK(std::stod(mid[0]) == 50.0);
        CHECK(std::stod(mid[1]) == doctest::Approx(0.4).epsilon(1e-12));

        CHECK(run_cli(args).out == result.out);  // byte deterministic
    }

    TEST_CASE("curve reproduces the uniform knee shape") {
        const auto result =
            run_cli("curve --model uniform --n 100 --lambda 1.5 --k-star 25,50,75 --x 0:100:1");
        CHECK(result.exit_code == 0);
        const auto lines = split(result.out, '\n');
        REQUIRE(lines.size() == 102);
        CHECK(lines[0] == "x,kstar=25,kstar=50,kstar=75");
        const std::int64_t knees[] = {25, 50, 75};
        for (int x = 0; x <= 100; ++x) {
            const auto fields = split(lines[static_cast<std::size_t>(x) + 1], ',');
            for (int c = 1; c <= 3; ++c) {
                const double v = std::stod(fields[static_cast<std::size_t>(c)]);
                const double knee = std::max(0.0, (x - static_cast<double>(knees[c - 1])) / 100.0);
                if (x <= knees[c - 1] - 5) {
                    CHECK(v < 1e-2);
                } else if (x >= knees[c - 1] + 5 && x <= 95) {
                    CHECK(std::fabs(v - knee) < 1e-2);
                }
            }
        }
    }

    TEST_CASE("curve multi-p labels and single-point sweeps") {
        const auto multi =
            run_cli("curve --model binomial --n 100 --p 0.3,0.5,0.7 --lambda 1.5 --k-star 50 "
                    "--x 40:60:5");
        CHECK(multi.exit_code == 0);
        const auto lines = split(multi.out, '\n');
        CHECK(lines[0] == "x,p=0.3,p=0.5,p=0.7");
        CHECK(lines.size() == 6);  // header + 5 rows

        const auto single = run_cli("curve --model uniform --n 100 --lambda 1.5 --k-star 50 --x 75");
        CHECK(single.exit_code == 0);
        const auto single_lines = split(single.out, '\n');
        REQUIRE(single_lines.size() == 2);  // header + one data row
        CHECK(single_lines[0] == "x,price");
    }

    TEST_CASE("curve rejects empty sweeps and bad model flags with exit 2") {
        CHECK(run_cli("curve --model uniform --n 100 --lambda 1.5 --k-star 50 --x 60:40:1")
                  .exit_code == 2);
        CHECK(run_cli("curve --model uniform --n 100 --lambda 1.5 --k-star 50 --x 0:100:-1")
                  .exit_code == 2);
        CHECK(run_cli("curve --model uniform --n 100 --p 0.5 --lambda 1.5 --k-star 50 --x 0:9:1")
                  .exit_code == 2);
        CHECK(run_cli("curve --model binomial --n 100 --lambda 1.5 --k-star 50 --x 0:9:1")
                  .exit_code == 2);
        CHECK(run_cli("curve --model prior-free --lambda 1.5 --k-star 50 --x 0:9:1").exit_code ==
              2);
    }

    TEST_CASE("simulate is byte deterministic and transfers risk fairly") {
        const fs::path config = scratch_dir() / "matched.json";
        spit(config, kMatchedConfig);
        const auto first = run_cli("simulate \"" + config.string() + "\"");
        CHECK(first.exit_code == 0);
        const auto second = run_cli("simulate \"" + config.string() + "\"");
        CHECK(second.out == first.out);

        const auto lines = split(first.out, '\n');
        CHECK(lines[0] == "metric,value,stderr,count");
        const double gap = report_value(first.out, "transfer_gap");
        const double se = report_value(first.out, "transfer_gap", 2);
        CHECK(report_value(first.out, "transfer_gap", 3) == 20000);
        CHECK(std::fabs(gap) <= 3.0 * se);
        // quantile rows are present and ordered
        CHECK(report_value(first.out, "transfer_gap_q05") <=
              report_value(first.out, "transfer_gap_q95"));
    }

    TEST_CASE("simulate honors flag overrides over config and environment") {
        const fs::path config = scratch_dir() / "no_seed.json";
        std::string body = kMatchedConfig;
        body.replace(body.find("  \"seed\": 7\n"), std::string("  \"seed\": 7\n").size(), "");
        body.replace(body.find("\"replications\": 20000,\n"),
                     std::string("\"replications\": 20000,\n").size(),
                     "\"replications\": 2000\n");
        spit(config, body);

        const auto flag_seed = run_cli("simulate --seed 123 \"" + config.string() + "\"");
        CHECK(flag_seed.exit_code == 0);
        const auto env_seed =
            run_cli("simulate \"" + config.string() + "\"", "PRIVOPT_SEED=123");
        CHECK(env_seed.exit_code == 0);
        CHECK(env_seed.out == flag_seed.out);

        // flag wins over a conflicting environment seed
        const auto both = run_cli("simulate --seed 123 \"" + config.string() + "\"",
                                  "PRIVOPT_SEED=999");
        CHECK(both.out == flag_seed.out);

        const auto other = run_cli("simulate --seed 321 \"" + config.string() + "\"");
        CHECK(other.out != flag_seed.out);

        CHECK(run_cli("simulate \"" + config.string() + "\"", "PRIVOPT_SEED=abc").exit_code == 2);
    }

    TEST_CASE("simulate reports a zero-variance market for a degenerate prior") {
        const fs::path config = scratch_dir() / "degenerate.json";
        spit(config, R"({
  "prior_true": {"kind": "unit", "n": 50, "p": 1.0},
  "prior_pricing": {"kind": "unit", "n": 50, "p": 1.0},
  "lambda": 1.5,
  "costs": {"c_s": 1.0, "c_p": 3.0},
  "k_star": 50,
  "replications": 500,
  "seed": 1
})");
        const auto result = run_cli("simulate \"" + config.string() + "\"");
        CHECK(result.exit_code == 0);
        CHECK(report_value(result.out, "premium") == 0.0);
        CHECK(report_value(result.out, "transfer_gap", 2) == 0.0);
    }

    TEST_CASE("simulate rejects malformed configs with exit 2 naming the key") {
        const fs::path unknown = scratch_dir() / "unknown.json";
        spit(unknown, R"({"prior_true": {"kind": "uniform", "n": 10}, "lambada": 1.5})");
        const auto unknown_result = run_cli("simulate \"" + unknown.string() + "\"");
        CHECK(unknown_result.exit_code == 2);
        CHECK(unknown_result.err.find("lambada") != std::string::npos);

        const fs::path nested = scratch_dir() / "nested.json";
        spit(nested, R"({
  "prior_true": {"kind": "uniform", "n": 10, "q": 0.5},
  "prior_pricing": {"kind": "uniform", "n": 10},
  "lambda": 1.5,
  "costs": {"c_s": 1.0, "c_p": 2.0},
  "k_star": 5,
  "replications": 10
})");
        const auto nested_result = run_cli("simulate \"" + nested.string() + "\"");
        CHECK(nested_result.exit_code == 2);
        CHECK(nested_result.err.find("prior_true.q") != std::string::npos);

        const fs::path missing = scratch_dir() / "missing.json";
        spit(missing, R"({"prior_true": {"kind": "uniform", "n": 10}})");
        const auto missing_result = run_cli("simulate \"" + missing.string() + "\"");
        CHECK(missing_result.exit_code == 2);
        CHECK(missing_result.err.find("prior_pricing") != std::string::npos);

        CHECK(run_cli("simulate \"" + (scratch_dir() / "nonexistent.json").string() + "\"")
                  .exit_code == 2);

        const fs::path mismatched = scratch_dir() / "mismatched.json";
        spit(mismatched, R"({
  "prior_true": {"kind": "uniform", "n": 10},
  "prior_pricing": {"kind": "uniform", "n": 20},
  "lambda": 1.5,
  "costs": {"c_s": 1.0, "c_p": 2.0},
  "k_star": 5,
  "replications": 10
})");
        CHECK(run_cli("simulate \"" + mismatched.string() + "\"").exit_code == 2);
    }

    TEST_CASE("verify passes on the shipped build and is seed deterministic") {
        const auto result = run_cli("verify");
        CHECK(result.exit_code == 0);
        CHECK(result.out.find("PASS posterior_normalization") != std::string::npos);
        CHECK(result.out.find("PASS unit_closed_form") != std::string::npos);
        CHECK(result.out.find("PASS binomial_endpoints") != std::string::npos);
        CHECK(result.out.find("FAIL") == std::string::npos);

        const auto a = run_cli("verify --instances 1000 --seed 7");
        const auto b = run_cli("verify --instances 1000 --seed 7");
        CHECK(a.exit_code == 0);
        CHECK(a.out == b.out);
    }

    TEST_CASE("verify detects an injected fault and names the check") {
        const auto result = run_cli("verify --inject-fault");
        CHECK(result.exit_code == 1);
        CHECK(result.out.find("FAIL unit_closed_form") != std::string::npos);
        // the failing instance is printed for reproduction
        CHECK(result.out.find("lambda=") != std::string::npos);
    }

    TEST_CASE("curve reads sweep defaults from a config file, flags win") {
        const fs::path config = scratch_dir() / "curve.json";
        spit(config, R"({
  "prior_pricing": {"kind": "uniform", "n": 100},
  "lambda": 1.5,
  "sweep": {"x_min": 0, "x_max": 100, "x_step": 1, "k_star": [25, 50, 75]}
})");
        const auto from_config = run_cli("curve --config \"" + config.string() + "\"");
        CHECK(from_config.exit_code == 0);
        const auto from_flags =
            run_cli("curve --model uniform --n 100 --lambda 1.5 --k-star 25,50,75 --x 0:100:1");
        CHECK(from_config.out == from_flags.out);

        // a flag overrides the config sweep
        const auto overridden =
            run_cli("curve --config \"" + config.string() + "\" --k-star 10");
        CHECK(overridden.exit_code == 0);
        CHECK(split(overridden.out, '\n')[0] == "x,price");
    }

    TEST_CASE("CSV numbers survive a parse/format round trip exactly") {
        const auto result =
            run_cli("curve --model binomial --n 100 --p 0.37 --lambda 1.5 --k-star 33 --x 0:100:7");
        CHECK(result.exit_code == 0);
        const auto lines = split(result.out, '\n');
        for (std::size_t row = 1; row < lines.size(); ++row) {
            for (const std::string& cell : split(lines[row], ',')) {
                CHECK(privopt::format_double(privopt::parse_double(cell)) == cell);
            }
        }
    }

    TEST_CASE("curve --out and stdout produce identical bytes") {
        const fs::path out_file = scratch_dir() / "curve.csv";
        const std::string args =
            "curve --model binomial --n 100 --p 0.5 --lambda 1.5 --k-star 50 --x 0:100:1";
        const auto stdout_run = run_cli(args);
        const auto file_run = run_cli(args + " --out \"" + out_file.string() + "\"");
        CHECK(stdout_run.exit_code == 0);
        CHECK(file_run.exit_code == 0);
        CHECK(slurp(out_file) == stdout_run.out);
    }
}
