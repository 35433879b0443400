#pragma once

#include <cstddef>
#include <span>

#include "tsnet/error.hpp"

namespace tsnet::detail {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Ordinary least squares y = slope*x + intercept. When y has no variance and
// the line reproduces it exactly, r2 is reported as 1.
inline LineFit ols(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw error(errc::degenerate_fit, "need at least two points to fit a line");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw error(errc::degenerate_fit, "abscissae have zero variance");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss_res += r * r;
  }
  if (syy > 0.0) {
    fit.r2 = 1.0 - ss_res / syy;
    if (fit.r2 < 0.0) fit.r2 = 0.0;
    if (fit.r2 > 1.0) fit.r2 = 1.0;
  } else {
    fit.r2 = 1.0;
  }
  return fit;
}

}  // namespace tsnet::detail
