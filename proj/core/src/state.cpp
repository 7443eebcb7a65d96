#include "exdyn/state.hpp"

#include <cmath>
#include <cstdio>

#include "exdyn/error.hpp"

namespace exdyn {

StateVector StateVector::from(std::span<const double> values) {
  if (values.size() == 2) return {values[0], values[1]};
  if (values.size() == 3) return {values[0], values[1], values[2]};
  throw ConfigError("state vector must have 2 or 3 components, got " + std::to_string(values.size()));
}

bool StateVector::finite() const noexcept {
  for (std::size_t i = 0; i < dim_; ++i) {
    if (!std::isfinite(c_[i])) return false;
  }
  return true;
}

std::string StateVector::to_string() const {
  std::string out = "(";
  char buf[32];
  for (std::size_t i = 0; i < dim_; ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", c_[i]);
    if (i > 0) out += ", ";
    out += buf;
  }
  return out + ")";
}

double SquareMatrix::determinant() const noexcept {
  const auto& m = *this;
  switch (n) {
    case 1:
      return m(0, 0);
    case 2:
      return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    case 3:
      return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
             m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    default:
      return 1.0;
  }
}

}  // namespace exdyn
