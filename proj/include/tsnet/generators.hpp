#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <fftw3.h>

#include "tsnet/error.hpp"
#include "tsnet/series.hpp"

namespace tsnet {

enum class GeneratorKind { constant, linear, convex, sawtooth, periodic, iid_uniform, iid_gaussian, fgn };

// Unused fields are ignored by kinds that do not read them.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::iid_uniform;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double hurst = 0.5;      // fgn
  double value = 1.0;      // constant
  double slope = 1.0;      // linear: slope*t + intercept; convex: slope*t^2 + intercept
  double intercept = 0.0;
  std::size_t period = 4;  // sawtooth (t mod period), periodic (sine)
  double amplitude = 1.0;  // periodic
};

inline std::optional<GeneratorKind> parse_generator_kind(std::string_view name) {
  std::string s(name);
  for (auto& c : s) {
    if (c == '-') c = '_';
  }
  if (s == "constant") return GeneratorKind::constant;
  if (s == "linear") return GeneratorKind::linear;
  if (s == "convex") return GeneratorKind::convex;
  if (s == "sawtooth") return GeneratorKind::sawtooth;
  if (s == "periodic") return GeneratorKind::periodic;
  if (s == "iid_uniform" || s == "uniform") return GeneratorKind::iid_uniform;
  if (s == "iid_gaussian" || s == "gaussian") return GeneratorKind::iid_gaussian;
  if (s == "fgn") return GeneratorKind::fgn;
  return std::nullopt;
}

// Stochastic kinds draw from std::mt19937_64 (output fixed by the C++
// standard). Uniforms take the top 53 bits; normals use Box-Muller. No
// std::*_distribution is involved, so fixtures reproduce across toolchains.
class SeriesRng {
 public:
  explicit SeriesRng(std::uint64_t seed) : engine_(seed) {}

  // [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    double u1 = 0.0;
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

namespace detail {

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};
struct FftwPlanDestroy {
  void operator()(fftw_plan_s* p) const noexcept { fftw_destroy_plan(p); }
};

// Unit-variance fractional Gaussian noise by circulant embedding of the
// autocovariance (Davies-Harte / Wood-Chan).
inline std::vector<double> fgn_samples(std::size_t n, double h, SeriesRng& rng) {
  const std::size_t half = std::max<std::size_t>(n, 2);
  const std::size_t m = 2 * half;
  auto autocov = [h](double k) {
    const double e = 2.0 * h;
    return 0.5 * (std::pow(k + 1.0, e) - 2.0 * std::pow(k, e) + std::pow(std::fabs(k - 1.0), e));
  };

  std::unique_ptr<fftw_complex[], FftwFree> in(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m)));
  std::unique_ptr<fftw_complex[], FftwFree> out(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m)));
  std::unique_ptr<fftw_plan_s, FftwPlanDestroy> plan(
      fftw_plan_dft_1d(static_cast<int>(m), in.get(), out.get(), FFTW_FORWARD, FFTW_ESTIMATE));

  for (std::size_t k = 0; k < m; ++k) {
    in[k][0] = autocov(static_cast<double>(std::min(k, m - k)));
    in[k][1] = 0.0;
  }
  fftw_execute(plan.get());
  std::vector<double> eigen(m);
  for (std::size_t k = 0; k < m; ++k) {
    double lambda = out[k][0];
    if (lambda < 0.0) {
      if (lambda < -1e-8 * static_cast<double>(m)) {
        throw error(errc::invalid_param, "circulant embedding is not positive semidefinite");
      }
      lambda = 0.0;
    }
    eigen[k] = lambda;
  }

  for (std::size_t k = 0; k < m; ++k) {
    const double scale = std::sqrt(eigen[k] / static_cast<double>(m));
    in[k][0] = scale * rng.normal();
    in[k][1] = scale * rng.normal();
  }
  fftw_execute(plan.get());
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = out[i][0];
  return x;
}

}  // namespace detail

inline TimeSeries generate(const GeneratorSpec& spec) {
  if (spec.n < 2) throw error(errc::invalid_param, "generator length must be at least 2");
  const std::size_t n = spec.n;
  std::vector<double> y(n);
  SeriesRng rng(spec.seed);
  std::string label;
  switch (spec.kind) {
    case GeneratorKind::constant:
      std::fill(y.begin(), y.end(), spec.value);
      label = "constant";
      break;
    case GeneratorKind::linear:
      for (std::size_t t = 0; t < n; ++t) y[t] = spec.slope * static_cast<double>(t) + spec.intercept;
      label = "linear";
      break;
    case GeneratorKind::convex:
      if (!(spec.slope > 0.0)) throw error(errc::invalid_param, "convex series needs a positive coefficient");
      for (std::size_t t = 0; t < n; ++t) {
        const double td = static_cast<double>(t);
        y[t] = spec.slope * td * td + spec.intercept;
      }
      label = "convex";
      break;
    case GeneratorKind::sawtooth:
      if (spec.period < 2) throw error(errc::invalid_param, "sawtooth period must be at least 2");
      for (std::size_t t = 0; t < n; ++t) y[t] = static_cast<double>(t % spec.period);
      label = "sawtooth";
      break;
    case GeneratorKind::periodic:
      if (spec.period < 2) throw error(errc::invalid_param, "period must be at least 2");
      for (std::size_t t = 0; t < n; ++t) {
        y[t] = spec.amplitude *
               std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(spec.period));
      }
      label = "periodic";
      break;
    case GeneratorKind::iid_uniform:
      for (auto& v : y) v = rng.uniform();
      label = "iid_uniform";
      break;
    case GeneratorKind::iid_gaussian:
      for (auto& v : y) v = rng.normal();
      label = "iid_gaussian";
      break;
    case GeneratorKind::fgn:
      if (!(spec.hurst > 0.0 && spec.hurst < 1.0)) throw error(errc::invalid_param, "fgn Hurst must lie in (0, 1)");
      y = detail::fgn_samples(n, spec.hurst, rng);
      label = "fgn";
      break;
  }
  return TimeSeries(std::move(y), std::move(label));
}

}  // namespace tsnet
