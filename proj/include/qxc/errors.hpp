#pragma once

#include <stdexcept>
#include <string>

namespace qxc {

// Shape of the inputs is inconsistent (degree-sum identity, matrix sizes, ...).
struct DimensionMismatch : std::invalid_argument {
    explicit DimensionMismatch(const std::string& msg) : std::invalid_argument(msg) {}
};

// The requested object provably does not exist, or resampling gave up.
struct Unsatisfiable : std::runtime_error {
    explicit Unsatisfiable(const std::string& msg) : std::runtime_error(msg) {}
};

// An enumeration or table would exceed its configured cap.
struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

// A numeric argument is outside the domain of the formula being evaluated.
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

struct SizeOverflow : std::runtime_error {
    explicit SizeOverflow(const std::string& msg) : std::runtime_error(msg) {}
};

// Noise-sampler knobs cannot meet the requested inclusion-probability cap.
struct InfeasibleKnobs : std::invalid_argument {
    explicit InfeasibleKnobs(const std::string& msg) : std::invalid_argument(msg) {}
};

struct PreconditionViolated : std::invalid_argument {
    explicit PreconditionViolated(const std::string& msg) : std::invalid_argument(msg) {}
};

// An internal invariant that must hold by construction was observed broken.
struct InvariantViolation : std::logic_error {
    explicit InvariantViolation(const std::string& msg) : std::logic_error(msg) {}
};

// The expansion-derived decoder parameter beta0 is non-positive.
struct NegativeBeta : std::domain_error {
    explicit NegativeBeta(const std::string& msg) : std::domain_error(msg) {}
};

// A recorded decoder trace fails replay verification.
struct ReplayMismatch : std::runtime_error {
    explicit ReplayMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace qxc
