#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tsnet/detail/grid.hpp"
#include "tsnet/detail/ols.hpp"
#include "tsnet/error.hpp"
#include "tsnet/parallel.hpp"
#include "tsnet/series.hpp"
#include "tsnet/visibility.hpp"

namespace tsnet {

struct DegreeDistribution {
  std::vector<std::size_t> support;  // distinct degrees, ascending
  std::vector<double> pdf;           // fraction of nodes with each degree
  std::size_t n_nodes = 0;

  double mean_degree() const noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) m += static_cast<double>(support[i]) * pdf[i];
    return m;
  }
};

using DegreeRange = std::pair<std::size_t, std::size_t>;

struct DegreeTailFit {
  double gamma = 0.0;
  double r2 = 0.0;
  DegreeRange k_range{1, 1};
  std::size_t points = 0;  // distinct degrees used in the regression
};

struct ClusteringReport {
  std::vector<double> per_node;  // C_i, 0 for nodes of degree < 2
  double average = 0.0;          // mean over all nodes
  std::optional<double> c_max;   // extremes over nodes of degree >= 2
  std::optional<double> c_min;
};

struct SmallWorldCurve {
  std::vector<std::size_t> sizes;
  std::vector<double> lengths;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  bool degenerate_slope = false;  // flat curve (e.g. every prefix complete)
};

struct SmallWorldThresholds {
  double min_fit_r2 = 0.95;
  double min_clustering = 0.5;
};

inline DegreeDistribution degree_distribution(const VisibilityGraph& g) {
  std::map<std::size_t, std::size_t> counts;
  for (std::size_t v = 0; v < g.node_count(); ++v) ++counts[g.degree(v)];
  DegreeDistribution d;
  d.n_nodes = g.node_count();
  for (const auto& [k, c] : counts) {
    d.support.push_back(k);
    d.pdf.push_back(static_cast<double>(c) / static_cast<double>(d.n_nodes));
  }
  return d;
}

// Least-squares line through (ln k, ln p(k)) for degrees in `k_range`;
// gamma is minus the slope. The default range runs from ceil(<k>) to k_max.
inline DegreeTailFit fit_powerlaw_tail(const DegreeDistribution& dist,
                                       std::optional<DegreeRange> k_range = std::nullopt) {
  DegreeRange range;
  if (k_range) {
    range = *k_range;
  } else {
    const double mean = dist.mean_degree();
    range.first = static_cast<std::size_t>(std::ceil(mean - 1e-9));
    range.second = dist.support.empty() ? 0 : dist.support.back();
  }
  range.first = std::max<std::size_t>(range.first, 1);

  std::vector<double> lk, lp;
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    const std::size_t k = dist.support[i];
    if (k < range.first || k > range.second || !(dist.pdf[i] > 0.0)) continue;
    lk.push_back(std::log(static_cast<double>(k)));
    lp.push_back(std::log(dist.pdf[i]));
  }
  if (lk.size() < 3) {
    throw error(errc::insufficient_tail_points, std::to_string(lk.size()) + " distinct degrees in [" +
                                                    std::to_string(range.first) + ", " +
                                                    std::to_string(range.second) + "], need 3");
  }
  const auto fit = detail::ols(lk, lp);
  DegreeTailFit out;
  out.gamma = -fit.slope;
  out.r2 = fit.r2;
  out.k_range = range;
  out.points = lk.size();
  return out;
}

namespace detail {

inline std::size_t sorted_intersection_size(std::span<const node_t> a, std::span<const node_t> b) noexcept {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

}  // namespace detail

inline ClusteringReport clustering(const VisibilityGraph& g) {
  const std::size_t n = g.node_count();
  ClusteringReport rep;
  rep.per_node.assign(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t k = g.degree(v);
    if (k < 2) continue;
    const auto nb = g.neighbors(v);
    std::size_t twice_links = 0;  // each neighbor-neighbor link counted from both ends
    for (node_t u : nb) twice_links += detail::sorted_intersection_size(nb, g.neighbors(u));
    const double c = static_cast<double>(twice_links) / (static_cast<double>(k) * static_cast<double>(k - 1));
    rep.per_node[v] = c;
    rep.c_max = rep.c_max ? std::max(*rep.c_max, c) : c;
    rep.c_min = rep.c_min ? std::min(*rep.c_min, c) : c;
  }
  double sum = 0.0;
  for (double c : rep.per_node) sum += c;
  rep.average = n ? sum / static_cast<double>(n) : 0.0;
  return rep;
}

// Pearson correlation of the degrees at either end of each edge. Sums are
// accumulated in integers, so a zero denominator is detected exactly.
inline double assortativity(const VisibilityGraph& g) {
  const std::size_t m = g.edge_count();
  if (m == 0) throw error(errc::zero_degree_variance, "graph has no edges");
  __int128 s1 = 0, s2 = 0, sjk = 0;  // sum(j+k), sum(j^2+k^2), sum(j*k)
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    const __int128 dv = static_cast<__int128>(g.degree(v));
    for (node_t u : g.neighbors(v)) {
      if (u <= v) continue;
      const __int128 du = static_cast<__int128>(g.degree(u));
      s1 += dv + du;
      s2 += dv * dv + du * du;
      sjk += dv * du;
    }
  }
  const __int128 mm = static_cast<__int128>(m);
  // Both terms of the ratio scaled by 4*M^2.
  const __int128 num = 4 * mm * sjk - s1 * s1;
  const __int128 den = 2 * mm * s2 - s1 * s1;
  if (den == 0) throw error(errc::zero_degree_variance, "all edge endpoints have equal degree");
  return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

// Breadth-first distances from `source`; unreachable nodes stay at max().
inline std::vector<std::uint32_t> bfs_distances(const VisibilityGraph& g, std::size_t source) {
  constexpr auto kUnreached = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> dist(g.node_count(), kUnreached);
  std::vector<node_t> queue;
  queue.reserve(g.node_count());
  dist[source] = 0;
  queue.push_back(static_cast<node_t>(source));
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const node_t v = queue[head];
    for (node_t u : g.neighbors(v)) {
      if (dist[u] == kUnreached) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  return dist;
}

// Mean shortest-path length over all unordered node pairs, by BFS from every
// source. Per-source totals are integers, so the result is independent of
// the worker count.
inline double all_pairs_average_path(const VisibilityGraph& g) {
  const std::size_t n = g.node_count();
  if (n < 2) throw error(errc::invalid_param, "average path length needs at least 2 nodes");
  std::vector<std::uint64_t> totals(n, 0);
  std::vector<char> disconnected(n, 0);
  parallel_blocks(n, [&](std::size_t lo, std::size_t hi) {
    std::vector<std::uint32_t> dist(n);
    std::vector<node_t> queue(n);
    constexpr auto kUnreached = std::numeric_limits<std::uint32_t>::max();
    for (std::size_t s = lo; s < hi; ++s) {
      std::fill(dist.begin(), dist.end(), kUnreached);
      dist[s] = 0;
      queue[0] = static_cast<node_t>(s);
      std::size_t tail = 1;
      std::uint64_t total = 0;
      for (std::size_t head = 0; head < tail; ++head) {
        const node_t v = queue[head];
        const std::uint32_t next = dist[v] + 1;
        for (node_t u : g.neighbors(v)) {
          if (dist[u] == kUnreached) {
            dist[u] = next;
            total += next;
            queue[tail++] = u;
          }
        }
      }
      totals[s] = total;
      if (tail != n) disconnected[s] = 1;
    }
  });
  if (std::find(disconnected.begin(), disconnected.end(), 1) != disconnected.end()) {
    throw error(errc::disconnected_graph, "graph is not connected");
  }
  std::uint64_t sum = 0;
  for (auto t : totals) sum += t;
  // `sum` counts every unordered pair twice.
  return static_cast<double>(sum) / (static_cast<double>(n) * static_cast<double>(n - 1));
}

// About 30 log-spaced prefix lengths from 64 (or N when shorter) to N.
inline std::vector<std::size_t> default_prefix_sizes(std::size_t n, std::size_t count = 30) {
  if (n < 2) return {};
  return detail::log_spaced_sizes(std::min<std::size_t>(64, n), n, count);
}

// L(N) of visibility graphs built on growing prefixes, fitted as
// L = slope * ln N + intercept.
inline SmallWorldCurve small_world_curve(const TimeSeries& ts, std::vector<std::size_t> sizes) {
  if (sizes.empty()) throw error(errc::invalid_param, "no prefix sizes given");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 2 || sizes[i] > ts.size()) {
      throw error(errc::invalid_param, "prefix size " + std::to_string(sizes[i]) + " outside [2, " +
                                           std::to_string(ts.size()) + "]");
    }
    if (i > 0 && sizes[i] <= sizes[i - 1]) throw error(errc::invalid_param, "prefix sizes must increase");
  }
  SmallWorldCurve curve;
  curve.sizes = sizes;
  std::vector<double> ln_n;
  for (const std::size_t n : sizes) {
    curve.lengths.push_back(all_pairs_average_path(build_fast(ts.prefix(n))));
    ln_n.push_back(std::log(static_cast<double>(n)));
  }
  if (sizes.size() >= 2) {
    const auto fit = detail::ols(ln_n, curve.lengths);
    curve.slope = fit.slope;
    curve.intercept = fit.intercept;
    curve.r2 = fit.r2;
  } else {
    curve.intercept = curve.lengths.front();
    curve.r2 = 0.0;
  }
  curve.degenerate_slope = std::fabs(curve.slope) < 1e-12;
  return curve;
}

// Logarithmic growth of L(N) (judged by fit quality) together with high
// clustering.
inline bool small_world_verdict(const SmallWorldCurve& curve, double average_clustering,
                                const SmallWorldThresholds& th = {}) noexcept {
  return curve.r2 >= th.min_fit_r2 && average_clustering >= th.min_clustering;
}

}  // namespace tsnet
