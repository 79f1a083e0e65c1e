#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "besimc/simharness.hpp"

using besimc::Execution;
using besimc::ExperimentConfig;
using besimc::ReplicationReport;

namespace {

double run_timed(const ExperimentConfig& config, Execution exec,
                 std::vector<ReplicationReport>& out) {
    const auto t0 = std::chrono::steady_clock::now();
    out = besimc::run_replications(config, exec);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

bool identical(const std::vector<ReplicationReport>& a,
               const std::vector<ReplicationReport>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].values.size() != b[i].values.size()) return false;
        if (std::memcmp(a[i].values.data(), b[i].values.data(),
                        a[i].values.size() * sizeof(double)) != 0)
            return false;
        if (std::memcmp(&a[i].mean, &b[i].mean, sizeof(double)) != 0) return false;
        if (std::memcmp(&a[i].mse, &b[i].mse, sizeof(double)) != 0) return false;
    }
    return true;
}

void bench(const char* label, const ExperimentConfig& config) {
    std::vector<ReplicationReport> serial_reports;
    std::vector<ReplicationReport> parallel_reports;
    const double ts = run_timed(config, Execution::serial, serial_reports);
    const double tp = run_timed(config, Execution::parallel, parallel_reports);
    std::printf("%-28s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   %s\n",
                label, ts, tp, ts / tp,
                identical(serial_reports, parallel_reports) ? "results identical"
                                                            : "RESULTS DIFFER");
}

} // namespace

int main(int argc, char** argv) {
    std::uint64_t seed = 1;
    if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; both paths run serially\n");
#endif

    ExperimentConfig scale = besimc::table_config(5, seed);
    scale.replications = 20000;
    scale.sample_sizes = {30};
    bench("closed-form scale, n=30", scale);

    ExperimentConfig location = besimc::table_config(3, seed);
    location.replications = 40;
    location.sample_sizes = {50};
    bench("sampled location, n=50", location);

    ExperimentConfig wide = besimc::table_config(4, seed);
    wide.replications = 20;
    bench("table-4 trio, n=100", wide);
    return 0;
}
