#include "besimc/simharness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>

#include "besimc/compensated.hpp"
#include "besimc/condexp.hpp"
#include "besimc/errors.hpp"
#include "besimc/hn_estimators.hpp"

namespace besimc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

enum class Target { location, scale, scale_sq };

Target estimator_target(const std::string& id) {
    if (id == "unbiased_location" || id == "mle_location" ||
        id == "mre_location" || id == "pitman_location")
        return Target::location;
    if (id == "unbiased_scale" || id == "mle_scale" || id == "mre_scale" ||
        id == "mre_scale_known_location" || id == "mvue_scale_known_location")
        return Target::scale;
    if (id == "unbiased_scale_sq") return Target::scale_sq;
    throw DomainError("unknown estimator: " + id);
}

double target_truth(Target target, const HalfNormalParams& params) {
    switch (target) {
    case Target::location: return params.xi;
    case Target::scale: return params.eta;
    case Target::scale_sq: return params.eta * params.eta;
    }
    return kNaN;
}

bool wants_cn(const std::string& id) {
    return id == "unbiased_location" || id == "unbiased_scale";
}

double evaluate_estimator(const std::string& id, const Sample& sample,
                          const std::optional<CnValue>& cn,
                          const HalfNormalParams& params,
                          const MreLocationConfig& mre_config, Xoshiro256pp& eng) {
    if (id == "unbiased_location") return unbiased_location(sample, *cn);
    if (id == "unbiased_scale") return unbiased_scale(sample, *cn);
    if (id == "unbiased_scale_sq") return unbiased_scale_sq(sample);
    if (id == "mle_location") return mle_location(sample);
    if (id == "mle_scale") return mle_scale(sample);
    if (id == "mre_scale") return mre_scale(sample);
    if (id == "mre_location") return mre_location(sample, mre_config, eng);
    if (id == "pitman_location") return pitman_location_known_scale(sample, params.eta);
    if (id == "mre_scale_known_location")
        return mre_scale_known_location(sample, params.xi);
    if (id == "mvue_scale_known_location")
        return mvue_scale_known_location(sample, params.xi);
    throw DomainError("unknown estimator: " + id);
}

double loss_value(LossKind kind, double x, const HalfNormalParams& p) {
    switch (kind) {
    case LossKind::W1:
    case LossKind::W1_prime: {
        const double d = x - p.eta;
        return d * d / (p.eta * p.eta);
    }
    case LossKind::W2: {
        const double d = x - p.xi;
        return d * d / (p.eta * p.eta);
    }
    case LossKind::W2_prime:
    case LossKind::squared_error: {
        const double d = x - p.xi;
        return d * d;
    }
    }
    return kNaN;
}

// R's default (type 7) sample quantile on a sorted list.
double quantile7(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) return kNaN;
    if (sorted.size() == 1) return sorted.front();
    const double h = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

template <typename Body>
void for_each_replicate(std::uint64_t reps, Execution exec, const Body& body) {
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t r = 0; r < static_cast<std::int64_t>(reps); ++r)
            body(static_cast<std::uint64_t>(r));
    } else {
        for (std::uint64_t r = 0; r < reps; ++r) body(r);
    }
}

// Fold per-replicate slots into a report, in replicate order regardless
// of which thread produced each slot.
ReplicationReport make_report(const ExperimentConfig& config,
                              const std::string& estimator_id, int n,
                              const std::vector<double>& slots,
                              const std::vector<unsigned char>& failed,
                              double truth, const HalfNormalParams* risk_params) {
    ReplicationReport rep;
    rep.experiment_id = config.experiment_id;
    rep.estimator_id = estimator_id;
    rep.n = n;
    rep.replications = config.replications;
    rep.seed = config.seed;
    rep.values.reserve(slots.size());
    for (std::size_t r = 0; r < slots.size(); ++r) {
        if (failed[r])
            ++rep.failures;
        else
            rep.values.push_back(slots[r]);
    }
    if (rep.values.empty()) {
        rep.mean = rep.mse = rep.risk = kNaN;
        rep.quantiles = {kNaN, kNaN, kNaN, kNaN, kNaN};
        return rep;
    }
    const auto count = static_cast<double>(rep.values.size());
    CompensatedSum sum;
    for (double v : rep.values) sum.add(v);
    rep.mean = sum.value() / count;
    CompensatedSum sqdev;
    for (double v : rep.values) sqdev.add((v - truth) * (v - truth));
    rep.mse = sqdev.value() / count;
    rep.risk = (config.loss.kind == LossKind::squared_error || risk_params == nullptr)
                   ? rep.mse
                   : risk(rep.values, config.loss, *risk_params);
    std::vector<double> sorted = rep.values;
    std::sort(sorted.begin(), sorted.end());
    rep.quantiles = {sorted.front(), quantile7(sorted, 0.25), quantile7(sorted, 0.5),
                     quantile7(sorted, 0.75), sorted.back()};
    return rep;
}

std::string format10(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace

ExperimentConfig table_config(int which, std::uint64_t seed) {
    ExperimentConfig config;
    config.seed = seed;
    switch (which) {
    case 1:
    case 2:
        config.experiment_id = which == 1 ? "table1" : "table2";
        config.true_params = BivariateNormalParams{0.5};
        config.sample_sizes = {10, 20, 30, 50, 100};
        config.replications = 100;
        config.estimator_set = {"condexp"};
        config.loss = {LossKind::squared_error};
        break;
    case 3:
        config.experiment_id = "table3";
        config.true_params = HalfNormalParams{10.0, 4.0};
        config.sample_sizes = {10, 20, 30, 50, 100};
        config.replications = 100;
        config.estimator_set = {"mre_location"};
        config.loss = {LossKind::squared_error};
        break;
    case 4:
        config.experiment_id = "table4";
        config.true_params = HalfNormalParams{10.0, 4.0};
        config.sample_sizes = {100};
        config.replications = 100;
        config.estimator_set = {"unbiased_location", "mle_location", "mre_location"};
        config.loss = {LossKind::squared_error};
        break;
    case 5:
        config.experiment_id = "table5";
        config.true_params = HalfNormalParams{10.0, 4.0};
        config.sample_sizes = {10, 20, 30};
        config.replications = 10000;
        config.estimator_set = {"unbiased_scale", "mle_scale", "mre_scale"};
        config.loss = {LossKind::W1};
        break;
    default:
        throw DomainError("table_config: table number must be in 1..5");
    }
    return config;
}

std::vector<ReplicationReport> run_replications(const ExperimentConfig& config,
                                                Execution exec) {
    if (config.replications < 1)
        throw DomainError("run_replications: replications must be positive");
    if (config.sample_sizes.empty())
        throw DomainError("run_replications: no sample sizes");
    if (config.estimator_set.empty())
        throw DomainError("run_replications: no estimators");
    if (!std::holds_alternative<HalfNormalParams>(config.true_params))
        throw DomainError("run_replications: needs half-normal true parameters");
    const auto& params = std::get<HalfNormalParams>(config.true_params);

    std::vector<Target> targets;
    bool any_cn = false;
    for (const std::string& id : config.estimator_set) {
        targets.push_back(estimator_target(id));
        any_cn = any_cn || wants_cn(id);
    }

    const std::uint64_t reps = config.replications;
    const std::size_t n_estimators = config.estimator_set.size();
    std::vector<ReplicationReport> reports;
    reports.reserve(config.sample_sizes.size() * n_estimators);

    for (int n : config.sample_sizes) {
        if (n < 2) throw DomainError("run_replications: sample size below 2");
        std::optional<CnValue> cn;
        if (any_cn) cn = c_n_quadrature(n);

        std::vector<std::vector<double>> slots(
            n_estimators, std::vector<double>(reps, kNaN));
        std::vector<std::vector<unsigned char>> failed(
            n_estimators, std::vector<unsigned char>(reps, 0));

        for_each_replicate(reps, exec, [&](std::uint64_t r) {
            auto eng = RandomStream{config.seed, r}.engine();
            std::vector<double> draws(static_cast<std::size_t>(n));
            for (double& d : draws) d = half_normal_draw(params, eng);
            const Sample sample(std::move(draws));
            for (std::size_t e = 0; e < n_estimators; ++e) {
                try {
                    slots[e][r] = evaluate_estimator(config.estimator_set[e], sample,
                                                     cn, params, config.mre_config,
                                                     eng);
                } catch (const Error&) {
                    failed[e][r] = 1;
                }
            }
        });

        for (std::size_t e = 0; e < n_estimators; ++e)
            reports.push_back(make_report(config, config.estimator_set[e], n,
                                          slots[e], failed[e],
                                          target_truth(targets[e], params), &params));
    }
    return reports;
}

std::vector<ReplicationReport> run_condexp_experiment(const ExperimentConfig& config,
                                                      Execution exec) {
    if (config.experiment_id != "table1" && config.experiment_id != "table2")
        throw DomainError("run_condexp_experiment: experiment must be table1 or table2");
    if (config.replications < 1)
        throw DomainError("run_condexp_experiment: replications must be positive");
    if (config.sample_sizes.empty())
        throw DomainError("run_condexp_experiment: no hit targets");
    if (!std::holds_alternative<BivariateNormalParams>(config.true_params))
        throw DomainError("run_condexp_experiment: needs bivariate parameters");
    const auto& params = std::get<BivariateNormalParams>(config.true_params);

    const bool direct = config.experiment_id == "table1";
    // E(Y|X=1) = rho for the linear-regression example; the transformed
    // pair has no closed-form truth, so its mse column stays NaN.
    const double truth = direct ? params.rho : kNaN;
    const double center = direct ? 1.0 : 0.5;
    constexpr double kEpsilon = 0.1;
    constexpr std::uint64_t kMaxDraws = 10000000;

    const std::uint64_t reps = config.replications;
    std::vector<ReplicationReport> reports;
    reports.reserve(config.sample_sizes.size());

    for (int target_hits : config.sample_sizes) {
        if (target_hits < 1)
            throw DomainError("run_condexp_experiment: hit target below 1");
        std::vector<double> slots(reps, kNaN);
        std::vector<unsigned char> failed(reps, 0);

        for_each_replicate(reps, exec, [&](std::uint64_t r) {
            auto eng = RandomStream{config.seed, r}.engine();
            auto source = [&]() {
                const auto [x, y] = bivariate_normal_draw(params, eng);
                if (direct) return JointDraw::make1(x, y);
                return JointDraw::make1(std::cos(x * x + y * y), std::sin(x * y));
            };
            try {
                slots[r] = estimate_until_hits(
                               source, BallQuery({center}, kEpsilon),
                               static_cast<std::uint64_t>(target_hits), kMaxDraws)
                               .value;
            } catch (const Error&) {
                failed[r] = 1;
            }
        });

        reports.push_back(make_report(config, "condexp", target_hits, slots, failed,
                                      truth, nullptr));
    }
    return reports;
}

double risk(const std::vector<double>& values, const LossSpec& loss,
            const HalfNormalParams& true_params) {
    if (values.empty()) throw DomainError("risk: empty values");
    CompensatedSum sum;
    for (double v : values) sum.add(loss_value(loss.kind, v, true_params));
    return sum.value() / static_cast<double>(values.size());
}

void emit_table(const std::vector<ReplicationReport>& reports,
                const std::string& destination) {
    if (reports.empty()) throw DomainError("emit_table: no reports");
    std::ofstream out(destination, std::ios::binary);
    if (!out) throw IoError("emit_table: cannot open " + destination);
    out << "experiment,estimator,n,replications,seed,mean,mse,risk,"
           "min,q1,median,q3,max,failures\n";
    for (const ReplicationReport& r : reports) {
        out << r.experiment_id << ',' << r.estimator_id << ',' << r.n << ','
            << r.replications << ',' << r.seed << ',' << format10(r.mean) << ','
            << format10(r.mse) << ',' << format10(r.risk) << ','
            << format10(r.quantiles.min) << ',' << format10(r.quantiles.q1) << ','
            << format10(r.quantiles.median) << ',' << format10(r.quantiles.q3) << ','
            << format10(r.quantiles.max) << ',' << r.failures << '\n';
    }
    out.flush();
    if (!out) throw IoError("emit_table: write failed for " + destination);
}

} // namespace besimc
