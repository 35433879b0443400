#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tsnet/detail/grid.hpp"
#include "tsnet/detail/ols.hpp"
#include "tsnet/error.hpp"
#include "tsnet/parallel.hpp"
#include "tsnet/series.hpp"

namespace tsnet {

using ScaleRange = std::pair<std::size_t, std::size_t>;

struct DfaResult {
  int order = 2;
  std::vector<std::size_t> scales;   // strictly increasing window sizes
  std::vector<double> fluctuations;  // F(n), one per scale
  std::optional<double> hurst;       // set by hurst()
  double fit_r2 = 0.0;
  ScaleRange fit_range{0, 0};
};

using detail::log_spaced_sizes;

// About 20 log-spaced windows from 8 (or the smallest legal size) to N/4.
inline std::vector<std::size_t> default_dfa_scales(std::size_t n, int order = 2, std::size_t count = 20) {
  const std::size_t smallest = static_cast<std::size_t>(order) + 2;
  const std::size_t hi = n / 4;
  const std::size_t lo = std::max<std::size_t>(smallest, std::min<std::size_t>(8, hi));
  if (hi < lo) return {};
  return detail::log_spaced_sizes(lo, hi, count);
}

namespace detail {

// Mean squared residual of an order-`order` least-squares polynomial fitted
// to every length-n window of `profile`, taking floor(N/n) windows from the
// front and as many from the back.
inline double windowed_residual_power(std::span<const double> profile, std::size_t n, int order) {
  const std::size_t terms = static_cast<std::size_t>(order) + 1;
  // Window coordinates centered and scaled to [-1, 1].
  Eigen::MatrixXd design(n, terms);
  const double half = 0.5 * static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = (static_cast<double>(k) - half) / half;
    double p = 1.0;
    for (std::size_t a = 0; a < terms; ++a) {
      design(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(a)) = p;
      p *= x;
    }
  }
  const Eigen::MatrixXd normal = design.transpose() * design;
  const Eigen::LDLT<Eigen::MatrixXd> solver(normal);

  const std::size_t total = profile.size();
  const std::size_t windows = total / n;
  double power = 0.0;
  Eigen::VectorXd window(static_cast<Eigen::Index>(n));
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t w = 0; w < windows; ++w) {
      const std::size_t start = pass == 0 ? w * n : total - (w + 1) * n;
      for (std::size_t k = 0; k < n; ++k) window(static_cast<Eigen::Index>(k)) = profile[start + k];
      const Eigen::VectorXd coef = solver.solve(design.transpose() * window);
      const Eigen::VectorXd residual = window - design * coef;
      power += residual.squaredNorm();
    }
  }
  return power / static_cast<double>(2 * windows * n);
}

}  // namespace detail

// Fluctuation function F(n) of the mean-subtracted cumulative profile after
// polynomial detrending of order `order` in each window. Scales are sorted
// and deduplicated; each must lie in [order+2, N/4].
inline DfaResult dfa_fluctuation(const TimeSeries& ts, std::vector<std::size_t> scales, int order = 2) {
  if (order < 1) throw error(errc::invalid_param, "DFA order must be at least 1");
  const std::size_t smallest = static_cast<std::size_t>(order) + 2;
  const std::size_t total = ts.size();
  if (total < 4 * smallest) {
    throw error(errc::series_too_short, "DFA of order " + std::to_string(order) + " needs at least " +
                                            std::to_string(4 * smallest) + " points");
  }
  std::sort(scales.begin(), scales.end());
  scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
  if (scales.empty()) throw error(errc::invalid_param, "no DFA scales given");
  for (const std::size_t n : scales) {
    if (n < smallest || n > total / 4) {
      throw error(errc::scale_out_of_range, "scale " + std::to_string(n) + " outside [" +
                                                std::to_string(smallest) + ", " + std::to_string(total / 4) + "]");
    }
  }

  const auto y = ts.values();
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(total);
  std::vector<double> profile(total);
  double acc = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    acc += y[i] - mean;
    profile[i] = acc;
  }

  double profile_power = 0.0;
  for (double v : profile) profile_power += v * v;
  // F(n) at rounding level means the profile was removed exactly (a
  // polynomial of degree <= order); report it as 0.
  const double floor = 1e-11 * std::sqrt(profile_power / static_cast<double>(total));

  DfaResult result;
  result.order = order;
  result.scales = scales;
  result.fluctuations.assign(scales.size(), 0.0);
  parallel_blocks(scales.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t s = lo; s < hi; ++s) {
      const double f = std::sqrt(detail::windowed_residual_power(profile, scales[s], order));
      result.fluctuations[s] = f <= floor ? 0.0 : f;
    }
  });
  result.fit_range = {scales.front(), scales.back()};
  return result;
}

// Slope of ln F(n) against ln n over the scales inside `fit_range` (all
// scales by default) with F(n) > 0. Stores H, R^2 and the range used.
inline double hurst(DfaResult& result, std::optional<ScaleRange> fit_range = std::nullopt) {
  const ScaleRange range = fit_range.value_or(
      result.scales.empty() ? ScaleRange{0, 0} : ScaleRange{result.scales.front(), result.scales.back()});
  std::vector<double> lx, ly;
  for (std::size_t s = 0; s < result.scales.size(); ++s) {
    const std::size_t n = result.scales[s];
    if (n < range.first || n > range.second || !(result.fluctuations[s] > 0.0)) continue;
    lx.push_back(std::log(static_cast<double>(n)));
    ly.push_back(std::log(result.fluctuations[s]));
  }
  if (lx.size() < 2) throw error(errc::degenerate_fit, "fewer than two scales with F(n) > 0 in fit range");
  const auto fit = detail::ols(lx, ly);
  result.hurst = fit.slope;
  result.fit_r2 = fit.r2;
  result.fit_range = range;
  return fit.slope;
}

// Fluctuation function over the default grid followed by the fit.
inline DfaResult dfa(const TimeSeries& ts, int order = 2) {
  auto result = dfa_fluctuation(ts, default_dfa_scales(ts.size(), order), order);
  hurst(result);
  return result;
}

enum class Persistence { anti_persistent, uncorrelated, persistent };

inline Persistence classify_persistence(double h) noexcept {
  constexpr double kTolerance = 1e-9;
  if (std::fabs(h - 0.5) <= kTolerance) return Persistence::uncorrelated;
  return h < 0.5 ? Persistence::anti_persistent : Persistence::persistent;
}

constexpr std::string_view to_string(Persistence p) noexcept {
  switch (p) {
    case Persistence::anti_persistent: return "anti-persistent";
    case Persistence::uncorrelated: return "uncorrelated";
    case Persistence::persistent: return "persistent";
  }
  return "unknown";
}

}  // namespace tsnet
