#include "vdwtoda/errors.hpp"

#include <cmath>

#include <fmt/format.h>

namespace vdwtoda {

const char* to_string(ChartFailure reason) noexcept {
  switch (reason) {
    case ChartFailure::a_nonpositive:
      return "a_nonpositive";
    case ChartFailure::v_out_of_range:
      return "v_out_of_range";
    case ChartFailure::volume_leq_b:
      return "volume_leq_b";
  }
  return "unknown";
}

namespace {

std::string chart_message(ChartFailure reason, double value) {
  switch (reason) {
    case ChartFailure::a_nonpositive:
      return fmt::format("Toda chart is singular for a <= 0 (a = {})", value);
    case ChartFailure::v_out_of_range:
      return fmt::format("inverse Toda chart needs a*exp(-2y/3)/U0 - b > 0 (got {})", value);
    case ChartFailure::volume_leq_b:
      return fmt::format("volume shift needs V > b (V - b = {})", value);
  }
  return "chart domain error";
}

const char* chart_field(ChartFailure reason) {
  switch (reason) {
    case ChartFailure::a_nonpositive:
      return "a";
    case ChartFailure::v_out_of_range:
      return "y";
    case ChartFailure::volume_leq_b:
      return "V";
  }
  return "";
}

}  // namespace

ChartDomainError::ChartDomainError(ChartFailure reason, double value)
    : DomainError(chart_message(reason, value), chart_field(reason), value), reason_(reason) {}

double guarded_exp(double arg) {
  if (!(std::abs(arg) <= kMaxExponent)) {
    throw RangeError(fmt::format("exponent {} exceeds guard {}", arg, kMaxExponent), arg);
  }
  return std::exp(arg);
}

}  // namespace vdwtoda
