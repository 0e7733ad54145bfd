#pragma once

#include <stdexcept>
#include <string>

namespace vdwtoda {

/// Input outside the domain of a formula (V <= b, non-positive step, ...).
/// `field` names the offending input so callers can report it.
class DomainError : public std::domain_error {
 public:
  DomainError(const std::string& message, std::string field, double value)
      : std::domain_error(message), field_(std::move(field)), value_(value) {}

  const std::string& field() const noexcept { return field_; }
  double value() const noexcept { return value_; }

 private:
  std::string field_;
  double value_;
};

/// An exponential argument exceeded the representable range.
class RangeError : public std::range_error {
 public:
  RangeError(const std::string& message, double exponent)
      : std::range_error(message), exponent_(exponent) {}

  double exponent() const noexcept { return exponent_; }

 private:
  double exponent_;
};

enum class ChartFailure { a_nonpositive, v_out_of_range, volume_leq_b };

const char* to_string(ChartFailure reason) noexcept;

/// A point lies outside the coordinate chart it was mapped into.
class ChartDomainError : public DomainError {
 public:
  ChartDomainError(ChartFailure reason, double value);

  ChartFailure reason() const noexcept { return reason_; }

 private:
  ChartFailure reason_;
};

/// Largest |argument| accepted by guarded exponentials.
inline constexpr double kMaxExponent = 700.0;

/// exp(arg), throwing RangeError when |arg| > kMaxExponent.
double guarded_exp(double arg);

}  // namespace vdwtoda
