#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace mfrp {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r_squared = 0.0;
  int n = 0;
};

// Ordinary least squares y = a + b x. Caller guarantees x.size() == y.size()
// and at least two distinct x values.
inline LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= static_cast<double>(n);
  ym /= static_cast<double>(n);

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - xm;
    const double dy = y[i] - ym;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }

  LinearFit f;
  f.n = static_cast<int>(n);
  f.slope = sxy / sxx;
  f.intercept = ym - f.slope * xm;

  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  if (syy <= 0.0) {
    f.r_squared = 1.0;  // exactly constant y: the line is a perfect fit
  } else {
    f.r_squared = 1.0 - ss_res / syy;
    if (f.r_squared < 0.0) f.r_squared = 0.0;
    if (f.r_squared > 1.0) f.r_squared = 1.0;
  }
  if (n > 2) f.slope_stderr = std::sqrt(ss_res / static_cast<double>(n - 2) / sxx);
  return f;
}

}  // namespace mfrp
