#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace besimc {

// Base class of every failure raised by this library. The name() of an
// error is the stable identifier surfaced by the CLI (exit-code mapping
// and diagnostics); what() carries a human-readable sentence.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& message)
        : std::runtime_error(message), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

// An argument fell outside an operation's stated domain.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& message)
        : Error("DomainError", message) {}
};

// A numerical routine failed to converge to its accuracy contract.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& message)
        : Error("NumericalError", message) {}
};

// Monte Carlo window collected zero hits after k draws.
class NoHitsError : public Error {
public:
    NoHitsError(std::uint64_t draws, double epsilon)
        : Error("NoHits",
                "no hits after " + std::to_string(draws) +
                    " draws with epsilon " + std::to_string(epsilon)),
          draws_(draws), epsilon_(epsilon) {}

    std::uint64_t draws() const noexcept { return draws_; }
    double epsilon() const noexcept { return epsilon_; }

private:
    std::uint64_t draws_;
    double epsilon_;
};

// Monte Carlo window ran out of draws before reaching the hit target.
class UnderfilledError : public Error {
public:
    UnderfilledError(std::uint64_t achieved_hits, std::uint64_t target_hits,
                     std::uint64_t draws)
        : Error("Underfilled",
                "only " + std::to_string(achieved_hits) + " of " +
                    std::to_string(target_hits) + " hits after " +
                    std::to_string(draws) + " draws"),
          achieved_hits_(achieved_hits), target_hits_(target_hits),
          draws_(draws) {}

    std::uint64_t achieved_hits() const noexcept { return achieved_hits_; }
    std::uint64_t target_hits() const noexcept { return target_hits_; }
    std::uint64_t draws() const noexcept { return draws_; }

private:
    std::uint64_t achieved_hits_;
    std::uint64_t target_hits_;
    std::uint64_t draws_;
};

// A file could not be read or written.
class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error("IoError", message) {}
};

// A sample was degenerate for the requested statistic (e.g. a constant
// sample where a ratio needs the spread, or tied anchor observations).
class DegenerateSampleError : public Error {
public:
    explicit DegenerateSampleError(const std::string& message)
        : Error("DegenerateSample", message) {}
};

// An observation lay outside the support implied by a known parameter.
class SupportViolationError : public Error {
public:
    explicit SupportViolationError(const std::string& message)
        : Error("SupportViolation", message) {}
};

// Every weight in a sampled cloud vanished.
class DegenerateCloudError : public Error {
public:
    explicit DegenerateCloudError(const std::string& message)
        : Error("DegenerateCloud", message) {}
};

// A generated cloud point failed post-verification. The sampler
// guarantees membership, so this indicates an internal bug.
class MembershipViolationError : public Error {
public:
    explicit MembershipViolationError(const std::string& message)
        : Error("MembershipViolation", message) {}
};

} // namespace besimc
