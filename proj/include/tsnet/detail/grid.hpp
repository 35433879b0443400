#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace tsnet::detail {

// `count` logarithmically spaced integers in [lo, hi], rounded and
// deduplicated.
inline std::vector<std::size_t> log_spaced_sizes(std::size_t lo, std::size_t hi, std::size_t count) {
  std::vector<std::size_t> out;
  if (lo == 0 || hi < lo || count == 0) return out;
  if (count == 1 || lo == hi) return {lo};
  const double a = std::log(static_cast<double>(lo));
  const double b = std::log(static_cast<double>(hi));
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    auto v = static_cast<std::size_t>(std::llround(std::exp(a + t * (b - a))));
    v = std::clamp(v, lo, hi);
    if (out.empty() || v > out.back()) out.push_back(v);
  }
  return out;
}

}  // namespace tsnet::detail
