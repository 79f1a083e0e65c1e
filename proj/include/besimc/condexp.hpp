#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "besimc/compensated.hpp"
#include "besimc/errors.hpp"

namespace besimc {

// Conditioning window: closed sup-norm ball of radius epsilon around u.
struct BallQuery {
    std::vector<double> center;
    double epsilon = 0.0;

    BallQuery(std::vector<double> center_, double epsilon_)
        : center(std::move(center_)), epsilon(epsilon_) {
        if (center.empty()) throw DomainError("BallQuery: empty center");
        if (!(epsilon > 0.0)) throw DomainError("BallQuery: epsilon must be positive");
        for (double c : center)
            if (!std::isfinite(c)) throw DomainError("BallQuery: non-finite center");
    }

    std::size_t dim() const { return center.size(); }
};

// One joint draw (U(w), f(w)). U lives in up to kMaxDim coordinates,
// stored inline so high-volume sources stay allocation-free.
struct JointDraw {
    static constexpr std::size_t kMaxDim = 4;

    std::array<double, kMaxDim> u_value{};
    std::uint32_t dim = 1;
    double f_value = 0.0;

    static JointDraw make1(double u0, double f0) {
        JointDraw d;
        d.u_value[0] = u0;
        d.dim = 1;
        d.f_value = f0;
        return d;
    }
};

struct CondExpEstimate {
    double value = 0.0;
    std::uint64_t hits = 0;
    std::uint64_t draws = 0;
    double epsilon = 0.0;
};

namespace detail {

inline bool is_hit(const JointDraw& d, const BallQuery& q) {
    if (d.dim != q.dim())
        throw DomainError("conditional expectation: draw dimension mismatch");
    for (std::size_t i = 0; i < q.dim(); ++i)
        if (!(std::abs(d.u_value[i] - q.center[i]) <= q.epsilon)) return false;
    return true;
}

struct HitAccumulator {
    CompensatedSum sum;
    std::uint64_t hits = 0;
    double fmin = 0.0;
    double fmax = 0.0;

    void add(double f) {
        if (hits == 0) {
            fmin = fmax = f;
        } else {
            fmin = std::min(fmin, f);
            fmax = std::max(fmax, f);
        }
        sum.add(f);
        ++hits;
    }

    // Ratio of sums; clamped into the hit range so the window-average
    // invariant survives the final rounding of the division.
    double value() const {
        return std::clamp(sum.value() / static_cast<double>(hits), fmin, fmax);
    }
};

} // namespace detail

// Fixed-budget estimate: consume exactly k draws, average f over hits.
template <typename Source>
CondExpEstimate estimate_fixed_k(Source&& source, const BallQuery& query,
                                 std::uint64_t k) {
    if (k == 0) throw DomainError("estimate_fixed_k: k must be positive");
    detail::HitAccumulator acc;
    for (std::uint64_t i = 0; i < k; ++i) {
        const JointDraw d = source();
        if (detail::is_hit(d, query)) acc.add(d.f_value);
    }
    if (acc.hits == 0) throw NoHitsError(k, query.epsilon);
    return {acc.value(), acc.hits, k, query.epsilon};
}

// Adaptive estimate: consume draws until target_hits hits have been
// collected, never exceeding max_draws.
template <typename Source>
CondExpEstimate estimate_until_hits(Source&& source, const BallQuery& query,
                                    std::uint64_t target_hits,
                                    std::uint64_t max_draws = 10000000) {
    if (target_hits == 0)
        throw DomainError("estimate_until_hits: target_hits must be positive");
    if (max_draws < target_hits)
        throw DomainError("estimate_until_hits: max_draws below target_hits");
    detail::HitAccumulator acc;
    std::uint64_t draws = 0;
    while (acc.hits < target_hits && draws < max_draws) {
        const JointDraw d = source();
        ++draws;
        if (detail::is_hit(d, query)) acc.add(d.f_value);
    }
    if (acc.hits < target_hits)
        throw UnderfilledError(acc.hits, target_hits, draws);
    return {acc.value(), acc.hits, draws, query.epsilon};
}

// Window-shrinking diagnostic: one estimate per epsilon, every run
// replaying the same draw sequence via a fresh source from the factory.
template <typename SourceFactory>
std::vector<CondExpEstimate> epsilon_refinement(SourceFactory&& factory,
                                                const std::vector<double>& center,
                                                const std::vector<double>& epsilons,
                                                std::uint64_t target_hits,
                                                std::uint64_t max_draws = 10000000) {
    if (epsilons.empty())
        throw DomainError("epsilon_refinement: need at least one epsilon");
    for (std::size_t i = 0; i + 1 < epsilons.size(); ++i)
        if (!(epsilons[i] > epsilons[i + 1]))
            throw DomainError("epsilon_refinement: epsilons must be strictly decreasing");
    std::vector<CondExpEstimate> out;
    out.reserve(epsilons.size());
    for (double eps : epsilons) {
        auto source = factory();
        out.push_back(estimate_until_hits(source, BallQuery(center, eps),
                                          target_hits, max_draws));
    }
    return out;
}

} // namespace besimc
