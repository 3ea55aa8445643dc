#ifndef TPEQW_ERRORS_HPP
#define TPEQW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tpeqw {

/// Argument outside a function's stated domain.
class domain_error : public std::invalid_argument {
  public:
    explicit domain_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// An intermediate-state energy denominator fell inside the resonance
/// tolerance. Second-order perturbation theory is not valid there, so the
/// matrix element is refused rather than returned as a near-infinity.
class resonance_error : public std::runtime_error {
  public:
    explicit resonance_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Adaptive quadrature did not reach the requested relative agreement.
class convergence_error : public std::runtime_error {
  public:
    explicit convergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// The request would generate an unreasonable number of events.
class resource_error : public std::runtime_error {
  public:
    explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Too few samples to form the requested estimate.
class insufficient_statistics_error : public std::runtime_error {
  public:
    explicit insufficient_statistics_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Config file rejected. The message carries "source:line" where known.
class config_error : public std::runtime_error {
  public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace tpeqw

#endif // TPEQW_ERRORS_HPP
