#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "besimc/distributions.hpp"
#include "besimc/errors.hpp"
#include "besimc/hn_estimators.hpp"
#include "besimc/rng.hpp"
#include "besimc/simharness.hpp"

using besimc::DomainError;
using besimc::Execution;
using besimc::ExperimentConfig;
using besimc::HalfNormalParams;
using besimc::LossKind;
using besimc::LossSpec;
using besimc::RandomStream;
using besimc::ReplicationReport;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig config;
    config.experiment_id = "unit";
    config.true_params = HalfNormalParams{10.0, 4.0};
    config.sample_sizes = {10, 20};
    config.replications = 500;
    config.seed = 99;
    config.estimator_set = {"unbiased_scale", "mle_scale", "mre_scale"};
    config.loss = {LossKind::W1};
    return config;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("canned configurations have the published shapes") {
    const auto t1 = besimc::table_config(1, 7);
    CHECK(t1.experiment_id == "table1");
    CHECK(t1.sample_sizes == std::vector<int>{10, 20, 30, 50, 100});
    CHECK(t1.replications == 100);
    CHECK(t1.estimator_set == std::vector<std::string>{"condexp"});

    const auto t5 = besimc::table_config(5, 7);
    CHECK(t5.experiment_id == "table5");
    CHECK(t5.sample_sizes == std::vector<int>{10, 20, 30});
    CHECK(t5.replications == 10000);
    CHECK(t5.loss.kind == LossKind::W1);
    CHECK(t5.estimator_set ==
          std::vector<std::string>{"unbiased_scale", "mle_scale", "mre_scale"});

    const auto t4 = besimc::table_config(4, 7);
    CHECK(t4.sample_sizes == std::vector<int>{100});
    CHECK(t4.estimator_set ==
          std::vector<std::string>{"unbiased_location", "mle_location",
                                   "mre_location"});

    CHECK_THROWS_AS(besimc::table_config(0, 7), DomainError);
    CHECK_THROWS_AS(besimc::table_config(6, 7), DomainError);
}

TEST_CASE("replicate protocol is the documented stream layout") {
    ExperimentConfig config;
    config.experiment_id = "unit";
    config.true_params = HalfNormalParams{10.0, 4.0};
    config.sample_sizes = {5};
    config.replications = 3;
    config.seed = 4242;
    config.estimator_set = {"mle_location"};

    const auto reports = besimc::run_replications(config);
    REQUIRE(reports.size() == 1);
    REQUIRE(reports[0].values.size() == 3);
    for (std::uint64_t r = 0; r < 3; ++r) {
        auto eng = RandomStream{4242, r}.engine();
        std::vector<double> draws(5);
        for (double& d : draws)
            d = besimc::half_normal_draw({10.0, 4.0}, eng);
        const besimc::Sample s(std::move(draws));
        CHECK(reports[0].values[r] == s.min());
    }
}

TEST_CASE("runs are deterministic and independent of estimator-set context") {
    auto config = small_config();
    const auto a = besimc::run_replications(config);
    const auto b = besimc::run_replications(config);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].values == b[i].values);
        CHECK(a[i].mean == b[i].mean);
        CHECK(a[i].mse == b[i].mse);
        CHECK(a[i].risk == b[i].risk);
    }

    // Dropping sibling estimators must not move the surviving one.
    auto solo = config;
    solo.estimator_set = {"mle_scale"};
    const auto c = besimc::run_replications(solo);
    REQUIRE(c.size() == 2);
    CHECK(c[0].values == a[1].values);
    CHECK(c[1].values == a[4].values);
}

TEST_CASE("cloud-based estimator is also context independent") {
    ExperimentConfig config;
    config.experiment_id = "unit";
    config.true_params = HalfNormalParams{10.0, 4.0};
    config.sample_sizes = {10};
    config.replications = 40;
    config.seed = 11;
    config.estimator_set = {"unbiased_location", "mle_location", "mre_location"};
    const auto trio = besimc::run_replications(config);

    config.estimator_set = {"mre_location"};
    const auto solo = besimc::run_replications(config);
    CHECK(trio[2].values == solo[0].values);
}

TEST_CASE("serial and parallel execution agree bit for bit") {
    const auto config = small_config();
    const auto par = besimc::run_replications(config, Execution::parallel);
    const auto ser = besimc::run_replications(config, Execution::serial);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
        CHECK(par[i].values == ser[i].values);
        CHECK(par[i].mean == ser[i].mean);
        CHECK(par[i].mse == ser[i].mse);
        CHECK(par[i].risk == ser[i].risk);
        CHECK(par[i].quantiles.median == ser[i].quantiles.median);
    }
}

TEST_CASE("failures are counted per replicate and starve the summary") {
    ExperimentConfig config;
    config.experiment_id = "unit";
    config.true_params = HalfNormalParams{10.0, 4.0};
    config.sample_sizes = {2};
    config.replications = 25;
    config.seed = 12;
    // The invariant configuration needs n >= 3, so the cloud-based
    // estimator fails on every replicate while the closed form survives.
    config.estimator_set = {"mle_location", "mre_location"};

    const auto reports = besimc::run_replications(config);
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].failures == 0);
    CHECK(reports[0].values.size() == 25);
    CHECK(reports[1].failures == 25);
    CHECK(reports[1].values.empty());
    CHECK(std::isnan(reports[1].mean));
    CHECK(std::isnan(reports[1].mse));
    CHECK(std::isnan(reports[1].quantiles.median));
}

TEST_CASE("summary statistics recompute from the retained values") {
    const auto config = small_config();
    const auto reports = besimc::run_replications(config);
    REQUIRE(reports.size() == 6);
    for (const auto& rep : reports) {
        long double sum = 0.0L;
        long double sq = 0.0L;
        for (double v : rep.values) {
            sum += v;
            sq += (static_cast<long double>(v) - 4.0L) * (v - 4.0L);
        }
        const double mean = static_cast<double>(sum / rep.values.size());
        const double mse = static_cast<double>(sq / rep.values.size());
        CHECK(std::abs(rep.mean - mean) <= 1e-12 * (1.0 + std::abs(mean)));
        CHECK(std::abs(rep.mse - mse) <= 1e-12 * (1.0 + std::abs(mse)));
    }
}

TEST_CASE("report quantiles follow the linear-interpolation rule") {
    ExperimentConfig config;
    config.experiment_id = "unit";
    config.true_params = HalfNormalParams{10.0, 4.0};
    config.sample_sizes = {8};
    config.replications = 5;
    config.seed = 13;
    config.estimator_set = {"mle_scale"};

    const auto reports = besimc::run_replications(config);
    std::vector<double> sorted = reports[0].values;
    std::sort(sorted.begin(), sorted.end());
    REQUIRE(sorted.size() == 5);
    // With five points the quartiles sit exactly on order statistics.
    CHECK(reports[0].quantiles.min == sorted[0]);
    CHECK(reports[0].quantiles.q1 == sorted[1]);
    CHECK(reports[0].quantiles.median == sorted[2]);
    CHECK(reports[0].quantiles.q3 == sorted[3]);
    CHECK(reports[0].quantiles.max == sorted[4]);

    config.replications = 2;
    const auto two = besimc::run_replications(config);
    std::vector<double> s2 = two[0].values;
    std::sort(s2.begin(), s2.end());
    REQUIRE(s2.size() == 2);
    CHECK(two[0].quantiles.q1 == s2[0] + 0.25 * (s2[1] - s2[0]));
    CHECK(two[0].quantiles.median == s2[0] + 0.5 * (s2[1] - s2[0]));
    CHECK(two[0].quantiles.q3 == s2[0] + 0.75 * (s2[1] - s2[0]));
}

TEST_CASE("risk identities across the loss menu") {
    const std::vector<double> values{9.0, 10.5, 12.0};
    const HalfNormalParams unit_eta{10.0, 1.0};
    CHECK(besimc::risk(values, {LossKind::W2}, unit_eta) ==
          besimc::risk(values, {LossKind::squared_error}, unit_eta));

    const HalfNormalParams params{10.0, 4.0};
    CHECK(besimc::risk({4.0, 4.0, 4.0}, {LossKind::W1}, params) == 0.0);
    CHECK(besimc::risk(values, {LossKind::W1}, params) ==
          besimc::risk(values, {LossKind::W1_prime}, params));
    const double w2 = besimc::risk(values, {LossKind::W2}, params);
    const double w2p = besimc::risk(values, {LossKind::W2_prime}, params);
    CHECK(w2 == doctest::Approx(w2p / 16.0).epsilon(1e-14));

    CHECK_THROWS_AS(besimc::risk({}, {LossKind::W1}, params), DomainError);
}

TEST_CASE("scale risk column uses the scale-invariant loss") {
    const auto config = small_config();
    const auto reports = besimc::run_replications(config);
    for (const auto& rep : reports) {
        const double recomputed =
            besimc::risk(rep.values, config.loss, HalfNormalParams{10.0, 4.0});
        CHECK(rep.risk == recomputed);
        CHECK(rep.risk == doctest::Approx(rep.mse / 16.0).epsilon(1e-12));
    }
}

TEST_CASE("conditional-expectation experiments report their hit targets") {
    ExperimentConfig config = besimc::table_config(1, 21);
    config.sample_sizes = {50, 100};
    config.replications = 30;
    const auto reports = besimc::run_condexp_experiment(config);
    REQUIRE(reports.size() == 2);
    for (const auto& rep : reports) {
        CHECK(rep.estimator_id == "condexp");
        CHECK(rep.failures == 0);
        CHECK(rep.values.size() == 30);
        CHECK(std::isfinite(rep.mse));
    }
    CHECK(reports[1].n == 100);
    CHECK(std::abs(reports[1].mean - 0.5) <= 0.12);

    ExperimentConfig t2 = besimc::table_config(2, 21);
    t2.sample_sizes = {20};
    t2.replications = 10;
    const auto transformed = besimc::run_condexp_experiment(t2);
    // No closed-form truth for the transformed pair.
    CHECK(std::isnan(transformed[0].mse));
    CHECK(std::isfinite(transformed[0].mean));

    ExperimentConfig bad = config;
    bad.experiment_id = "table3";
    CHECK_THROWS_AS(besimc::run_condexp_experiment(bad), DomainError);
    bad = config;
    bad.true_params = HalfNormalParams{10.0, 4.0};
    CHECK_THROWS_AS(besimc::run_condexp_experiment(bad), DomainError);
}

TEST_CASE("run validation rejects malformed configurations") {
    auto config = small_config();
    config.replications = 0;
    CHECK_THROWS_AS(besimc::run_replications(config), DomainError);
    config = small_config();
    config.sample_sizes.clear();
    CHECK_THROWS_AS(besimc::run_replications(config), DomainError);
    config = small_config();
    config.estimator_set.clear();
    CHECK_THROWS_AS(besimc::run_replications(config), DomainError);
    config = small_config();
    config.estimator_set = {"no_such_estimator"};
    CHECK_THROWS_AS(besimc::run_replications(config), DomainError);
    config = small_config();
    config.sample_sizes = {1};
    CHECK_THROWS_AS(besimc::run_replications(config), DomainError);
    config = small_config();
    config.true_params = besimc::BivariateNormalParams{0.5};
    CHECK_THROWS_AS(besimc::run_replications(config), DomainError);
}

TEST_CASE("published scale study orders the mean squared errors") {
    ExperimentConfig config = besimc::table_config(5, 20260814);
    config.sample_sizes = {10};
    config.replications = 4000;
    const auto reports = besimc::run_replications(config);
    REQUIRE(reports.size() == 3);
    const double unbiased = reports[0].mse;
    const double mle = reports[1].mse;
    const double mre = reports[2].mse;
    CHECK(mre < mle);
    CHECK(mle < unbiased);
}

TEST_CASE("table emission is stable, exact, and validated") {
    auto config = small_config();
    config.replications = 12;
    const auto reports = besimc::run_replications(config);

    const std::string path = "emit_test.csv";
    besimc::emit_table(reports, path);
    const std::string first = slurp(path);
    besimc::emit_table(reports, path);
    CHECK(first == slurp(path));

    std::istringstream lines(first);
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line ==
          "experiment,estimator,n,replications,seed,mean,mse,risk,min,q1,"
          "median,q3,max,failures");
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 13);
    }
    CHECK(rows == 6);
    std::remove(path.c_str());

    CHECK_THROWS_AS(besimc::emit_table({}, path), DomainError);
    CHECK_THROWS_AS(besimc::emit_table(reports, "no_such_dir/x.csv"),
                    besimc::IoError);

    // NaN summary columns must render as plain nan.
    ExperimentConfig t2 = besimc::table_config(2, 5);
    t2.sample_sizes = {10};
    t2.replications = 3;
    besimc::emit_table(besimc::run_condexp_experiment(t2), path);
    const std::string nan_csv = slurp(path);
    CHECK(nan_csv.find(",nan,") != std::string::npos);
    std::remove(path.c_str());
}
