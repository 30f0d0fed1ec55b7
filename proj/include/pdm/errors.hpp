#pragma once

#include <stdexcept>
#include <string>

namespace pdm {

// Exact arithmetic overflowed its fixed-width backing store. Raised instead
// of silently losing exactness.
struct OverflowError : std::runtime_error {
  explicit OverflowError(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidParam : std::invalid_argument {
  explicit InvalidParam(const std::string& what) : std::invalid_argument(what) {}
};

// Evaluation at x = 0 of a coefficient carrying a negative sinh power.
struct PoleAtOrigin : std::domain_error {
  explicit PoleAtOrigin(const std::string& what) : std::domain_error(what) {}
};

struct DerivativeOrderUnsupported : std::domain_error {
  explicit DerivativeOrderUnsupported(const std::string& what) : std::domain_error(what) {}
};

struct UnknownIdentity : std::invalid_argument {
  explicit UnknownIdentity(const std::string& what) : std::invalid_argument(what) {}
};

// Linear matching of an operator against a basis left a nonzero residual.
struct NoMatch : std::runtime_error {
  explicit NoMatch(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidBranch : std::runtime_error {
  explicit InvalidBranch(const std::string& what) : std::runtime_error(what) {}
};

struct PoleInSigma : std::domain_error {
  explicit PoleInSigma(const std::string& what) : std::domain_error(what) {}
};

struct PhaseMismatch : std::runtime_error {
  explicit PhaseMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateGram : std::runtime_error {
  explicit DegenerateGram(const std::string& what) : std::runtime_error(what) {}
};

struct NonConvergent : std::runtime_error {
  explicit NonConvergent(const std::string& what) : std::runtime_error(what) {}
};

struct TruncationTooSmall : std::runtime_error {
  explicit TruncationTooSmall(const std::string& what) : std::runtime_error(what) {}
};

struct BesselZeroNotFound : std::runtime_error {
  explicit BesselZeroNotFound(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pdm
