#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "besimc/condexp.hpp"
#include "besimc/distributions.hpp"
#include "besimc/errors.hpp"
#include "besimc/hn_estimators.hpp"
#include "besimc/mre_location.hpp"
#include "besimc/simharness.hpp"

namespace {

// Argument-level failure discovered after CLI11 parsing (exit code 2).
struct ArgumentFailure {
    std::string message;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("BESIMC_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0')
            throw ArgumentFailure{"BESIMC_SEED is not an unsigned integer: " +
                                  std::string(env)};
        return v;
    }
    return 0;
}

std::vector<double> parse_observations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw besimc::IoError("cannot open input file " + path);
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t b = 0;
        std::size_t e = line.size();
        while (b < e && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(line[e - 1]))) --e;
        if (b == e) continue;
        const std::string token = line.substr(b, e - b);
        char* end = nullptr;
        const double v = std::strtod(token.c_str(), &end);
        if (end != token.c_str() + token.size())
            throw ArgumentFailure{"cannot parse observation on line " +
                                  std::to_string(lineno)};
        values.push_back(v);
    }
    if (in.bad()) throw besimc::IoError("read failure on " + path);
    return values;
}

const std::vector<std::string> kEstimators = {
    "unbiased_location",        "unbiased_scale",
    "unbiased_scale_sq",        "mle_location",
    "mle_scale",                "mre_scale",
    "mre_location",             "pitman_location",
    "mre_scale_known_location", "mvue_scale_known_location"};

besimc::LossKind parse_loss(const std::string& name) {
    if (name == "W1") return besimc::LossKind::W1;
    if (name == "W2") return besimc::LossKind::W2;
    if (name == "W1_prime") return besimc::LossKind::W1_prime;
    if (name == "W2_prime") return besimc::LossKind::W2_prime;
    if (name == "squared_error") return besimc::LossKind::squared_error;
    throw ArgumentFailure{"unknown loss: " + name};
}

int cmd_tables(const std::vector<int>& which, std::uint64_t seed,
               const std::string& out_dir) {
    for (int w : which) {
        const besimc::ExperimentConfig config = besimc::table_config(w, seed);
        const auto reports = w <= 2 ? besimc::run_condexp_experiment(config)
                                    : besimc::run_replications(config);
        const auto path = std::filesystem::path(out_dir) /
                          ("table" + std::to_string(w) + ".csv");
        besimc::emit_table(reports, path.string());
        std::printf("wrote %s\n", path.string().c_str());
    }
    return 0;
}

int cmd_estimate(const std::string& estimator, const std::string& input,
                 const std::optional<double>& eta0,
                 const std::optional<double>& xi0, std::uint64_t seed) {
    const besimc::Sample sample(parse_observations(input));
    double value = 0.0;
    if (estimator == "unbiased_location" || estimator == "unbiased_scale") {
        const besimc::CnValue cn =
            besimc::c_n_quadrature(static_cast<int>(sample.n()));
        value = estimator == "unbiased_location"
                    ? besimc::unbiased_location(sample, cn)
                    : besimc::unbiased_scale(sample, cn);
    } else if (estimator == "unbiased_scale_sq") {
        value = besimc::unbiased_scale_sq(sample);
    } else if (estimator == "mle_location") {
        value = besimc::mle_location(sample);
    } else if (estimator == "mle_scale") {
        value = besimc::mle_scale(sample);
    } else if (estimator == "mre_scale") {
        value = besimc::mre_scale(sample);
    } else if (estimator == "pitman_location") {
        if (!eta0) throw ArgumentFailure{"pitman_location requires --eta0"};
        value = besimc::pitman_location_known_scale(sample, *eta0);
    } else if (estimator == "mre_scale_known_location" ||
               estimator == "mvue_scale_known_location") {
        if (!xi0) throw ArgumentFailure{estimator + " requires --xi0"};
        value = estimator == "mre_scale_known_location"
                    ? besimc::mre_scale_known_location(sample, *xi0)
                    : besimc::mvue_scale_known_location(sample, *xi0);
    } else if (estimator == "mre_location") {
        const besimc::MreLocationConfig config;
        const besimc::ConstrainedSample cloud = besimc::constrained_sampler(
            sample, config, besimc::RandomStream{seed, 0});
        const double c = besimc::rho_estimate(sample, cloud);
        value = besimc::t0_star(sample) - c * besimc::t1_star(sample);
        std::printf("%.10g\n", value);
        std::printf("m=%zu epsilon=%.10g\n", cloud.points.size(),
                    cloud.epsilon_used);
        return 0;
    } else {
        throw ArgumentFailure{"unknown estimator: " + estimator};
    }
    std::printf("%.10g\n", value);
    return 0;
}

int cmd_condexp(const std::string& example, double epsilon,
                std::uint64_t target_hits, std::uint64_t max_draws,
                std::uint64_t seed) {
    const besimc::BivariateNormalParams params{0.5};
    auto eng = besimc::RandomStream{seed, 0}.engine();
    const bool direct = example == "1a";
    auto source = [&]() {
        const auto [x, y] = besimc::bivariate_normal_draw(params, eng);
        if (direct) return besimc::JointDraw::make1(x, y);
        return besimc::JointDraw::make1(std::cos(x * x + y * y), std::sin(x * y));
    };
    const besimc::BallQuery query({direct ? 1.0 : 0.5}, epsilon);
    const besimc::CondExpEstimate estimate =
        besimc::estimate_until_hits(source, query, target_hits, max_draws);
    std::printf("value=%.10g hits=%" PRIu64 " draws=%" PRIu64 "\n",
                estimate.value, estimate.hits, estimate.draws);
    return 0;
}

int cmd_simulate(const std::vector<std::string>& estimators,
                 const std::vector<int>& sizes, std::uint64_t replications,
                 double xi, double eta, const std::string& loss,
                 std::uint64_t seed, const std::string& out, bool serial) {
    for (const std::string& id : estimators)
        if (std::find(kEstimators.begin(), kEstimators.end(), id) ==
            kEstimators.end())
            throw ArgumentFailure{"unknown estimator: " + id};
    besimc::ExperimentConfig config;
    config.experiment_id = "custom";
    config.true_params = besimc::HalfNormalParams{xi, eta};
    config.sample_sizes = sizes;
    config.replications = replications;
    config.seed = seed;
    config.estimator_set = estimators;
    config.loss = {parse_loss(loss)};
    const auto reports = besimc::run_replications(
        config, serial ? besimc::Execution::serial : besimc::Execution::parallel);
    besimc::emit_table(reports, out);
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo conditional expectations and half-normal estimators"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed_flag;

    auto* tables = app.add_subcommand("tables", "Reproduce the built-in experiment tables");
    std::vector<int> which = {1, 2, 3, 4, 5};
    std::string out_dir = ".";
    tables->add_option("--which", which, "Tables to run (subset of 1..5)")
        ->delimiter(',')
        ->check(CLI::Range(1, 5));
    tables->add_option("--seed", seed_flag, "Base seed (fallback: BESIMC_SEED, then 0)");
    tables->add_option("--out", out_dir, "Output directory (must exist)");

    auto* estimate = app.add_subcommand("estimate", "Run one estimator on a file of observations");
    std::string estimator;
    std::string input;
    std::optional<double> eta0;
    std::optional<double> xi0;
    estimate->add_option("--estimator", estimator, "Estimator identifier")
        ->required()
        ->check(CLI::IsMember(kEstimators));
    estimate->add_option("--input", input, "Path to one-observation-per-line file")
        ->required();
    estimate->add_option("--eta0", eta0, "Known scale (pitman_location)");
    estimate->add_option("--xi0", xi0, "Known location (known-location scale estimators)");
    estimate->add_option("--seed", seed_flag, "Seed for mre_location's sampler");

    auto* condexp = app.add_subcommand("condexp", "Windowed conditional-expectation estimate");
    std::string example = "1a";
    double epsilon = 0.1;
    std::uint64_t target_hits = 100;
    std::uint64_t max_draws = 10000000;
    condexp->add_option("--example", example, "Built-in example: 1a = E(Y|X=1), 1b = E(sin XY | cos(X^2+Y^2) = 0.5)")
        ->check(CLI::IsMember({"1a", "1b"}));
    condexp->add_option("--epsilon", epsilon, "Window radius")
        ->check(CLI::PositiveNumber);
    condexp->add_option("--target-hits", target_hits, "Hits to collect")
        ->check(CLI::PositiveNumber);
    condexp->add_option("--max-draws", max_draws, "Draw budget");
    condexp->add_option("--seed", seed_flag, "Seed");

    auto* simulate = app.add_subcommand("simulate", "Replicated half-normal experiment with chosen estimators");
    std::vector<std::string> sim_estimators;
    std::vector<int> sim_sizes;
    std::uint64_t sim_reps = 100;
    double sim_xi = 10.0;
    double sim_eta = 4.0;
    std::string sim_loss = "squared_error";
    std::string sim_out = "simulation.csv";
    bool sim_serial = false;
    simulate->add_option("--estimators", sim_estimators, "Estimator identifiers")
        ->required()
        ->delimiter(',')
        ->check(CLI::IsMember(kEstimators));
    simulate->add_option("--n", sim_sizes, "Sample sizes")
        ->required()
        ->delimiter(',');
    simulate->add_option("--replications", sim_reps, "Replications per size")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--xi", sim_xi, "True location");
    simulate->add_option("--eta", sim_eta, "True scale")->check(CLI::PositiveNumber);
    simulate->add_option("--loss", sim_loss, "Loss kind")
        ->check(CLI::IsMember({"W1", "W2", "W1_prime", "W2_prime", "squared_error"}));
    simulate->add_option("--seed", seed_flag, "Base seed");
    simulate->add_option("--out", sim_out, "Output CSV path");
    simulate->add_flag("--serial", sim_serial, "Force the serial reference path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const std::uint64_t seed = resolve_seed(seed_flag);
        if (tables->parsed()) return cmd_tables(which, seed, out_dir);
        if (estimate->parsed())
            return cmd_estimate(estimator, input, eta0, xi0, seed);
        if (condexp->parsed())
            return cmd_condexp(example, epsilon, target_hits, max_draws, seed);
        if (simulate->parsed())
            return cmd_simulate(sim_estimators, sim_sizes, sim_reps, sim_xi,
                                sim_eta, sim_loss, seed, sim_out, sim_serial);
        return 2;
    } catch (const ArgumentFailure& e) {
        std::fprintf(stderr, "error: %s\n", e.message.c_str());
        return 2;
    } catch (const besimc::UnderfilledError& e) {
        std::fprintf(stderr, "error: %s: %s\n", e.name().c_str(), e.what());
        return 4;
    } catch (const besimc::NoHitsError& e) {
        std::fprintf(stderr, "error: %s: %s\n", e.name().c_str(), e.what());
        return 4;
    } catch (const besimc::IoError& e) {
        std::fprintf(stderr, "error: %s: %s\n", e.name().c_str(), e.what());
        return 1;
    } catch (const besimc::Error& e) {
        std::fprintf(stderr, "error: %s: %s\n", e.name().c_str(), e.what());
        return 3;
    }
}
