#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "besimc/distributions.hpp"
#include "besimc/mre_location.hpp"

namespace besimc {

enum class LossKind { W1, W2, W1_prime, W2_prime, squared_error };

struct LossSpec {
    LossKind kind = LossKind::squared_error;
};

struct ExperimentConfig {
    std::string experiment_id;
    std::variant<HalfNormalParams, BivariateNormalParams> true_params =
        HalfNormalParams{10.0, 4.0};
    std::vector<int> sample_sizes;
    std::uint64_t replications = 1;
    std::uint64_t seed = 0;
    std::vector<std::string> estimator_set;
    LossSpec loss;
    MreLocationConfig mre_config;
};

struct Quantiles {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

struct ReplicationReport {
    std::string experiment_id;
    std::string estimator_id;
    int n = 0;
    std::uint64_t replications = 0;
    std::uint64_t seed = 0;
    std::vector<double> values;
    double mean = 0.0;
    double mse = 0.0;
    double risk = 0.0;
    Quantiles quantiles;
    std::uint64_t failures = 0;
};

// Serial path is the reference; the parallel path must reproduce it
// bit for bit (slot writes, fixed-order reduction).
enum class Execution { serial, parallel };

// Canned configurations reproducing the published experiments 1..5.
ExperimentConfig table_config(int which, std::uint64_t seed);

std::vector<ReplicationReport> run_replications(const ExperimentConfig& config,
                                                Execution exec = Execution::parallel);

std::vector<ReplicationReport> run_condexp_experiment(const ExperimentConfig& config,
                                                      Execution exec = Execution::parallel);

double risk(const std::vector<double>& values, const LossSpec& loss,
            const HalfNormalParams& true_params);

void emit_table(const std::vector<ReplicationReport>& reports,
                const std::string& destination);

} // namespace besimc
