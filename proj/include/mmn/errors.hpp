#pragma once

#include <stdexcept>
#include <string>

namespace mmn {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Adaptive quadrature stopped before meeting its tolerance.
class IntegrationError : public std::runtime_error {
public:
  IntegrationError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}
  double achieved_error() const noexcept { return achieved_error_; }

private:
  double achieved_error_;
};

/// Problem too large for an exhaustive method.
class SizeError : public std::length_error {
public:
  using std::length_error::length_error;
};

/// Rejection sampler accepted too few proposals to be trusted.
class InfeasibleRegionError : public std::runtime_error {
public:
  InfeasibleRegionError(const std::string& what, double acceptance_rate)
      : std::runtime_error(what), acceptance_rate_(acceptance_rate) {}
  double acceptance_rate() const noexcept { return acceptance_rate_; }

private:
  double acceptance_rate_;
};

/// Monte Carlo standard error above the requested ceiling.
class StatisticalError : public std::runtime_error {
public:
  StatisticalError(const std::string& what, double std_error)
      : std::runtime_error(what), std_error_(std_error) {}
  double std_error() const noexcept { return std_error_; }

private:
  double std_error_;
};

}  // namespace mmn
