#pragma once

#include <stdexcept>
#include <string>

namespace mdcf {

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

/// An iterative routine stopped before meeting its tolerance.
class NumericError : public std::runtime_error
{
  public:
    NumericError(const std::string& what, double best_estimate)
        : std::runtime_error(what), best_estimate_(best_estimate)
    {}

    double best_estimate() const noexcept { return best_estimate_; }

  private:
    double best_estimate_;
};

/// Expected arrivals in one step exceeded the frozen-intensity guard.
class StepSizeError : public std::runtime_error
{
  public:
    StepSizeError(const std::string& what, double step_mass)
        : std::runtime_error(what), step_mass_(step_mass)
    {}

    double step_mass() const noexcept { return step_mass_; }

  private:
    double step_mass_;
};

/// A model or run parameter violates an invariant. field() names the offender.
class ConfigError : public std::invalid_argument
{
  public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field))
    {}

    const std::string& field() const noexcept { return field_; }

  private:
    std::string field_;
};

/// The analytic evaluator only covers the decoupled model.
class UnsupportedConfiguration : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace mdcf
