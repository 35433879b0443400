#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "tsnet/detail/predicates.hpp"
#include "tsnet/error.hpp"
#include "tsnet/series.hpp"

namespace tsnet {

using node_t = std::uint32_t;
using Edge = std::pair<node_t, node_t>;

// Undirected simple graph in compressed sparse row form. Every neighbor list
// is sorted ascending; each edge appears once in each endpoint's list.
class VisibilityGraph {
 public:
  VisibilityGraph() : offsets_(1, 0) {}

  // Builds from an edge list. Pairs may come in any order and orientation;
  // self-loops and duplicates are rejected.
  VisibilityGraph(std::size_t node_count, std::span<const Edge> edges) : offsets_(node_count + 1, 0) {
    for (const auto& [a, b] : edges) {
      if (a == b || a >= node_count || b >= node_count) {
        throw error(errc::invalid_param, "edge (" + std::to_string(a) + "," + std::to_string(b) + ") is invalid");
      }
      ++offsets_[a + 1];
      ++offsets_[b + 1];
    }
    for (std::size_t i = 0; i < node_count; ++i) offsets_[i + 1] += offsets_[i];
    neighbors_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& [a, b] : edges) {
      neighbors_[fill[a]++] = b;
      neighbors_[fill[b]++] = a;
    }
    for (std::size_t i = 0; i < node_count; ++i) {
      auto first = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
      auto last = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
      std::sort(first, last);
      if (std::adjacent_find(first, last) != last) {
        throw error(errc::invalid_param, "duplicate edge at node " + std::to_string(i));
      }
    }
  }

  std::size_t node_count() const noexcept { return offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }

  std::span<const node_t> neighbors(std::size_t v) const noexcept {
    return {neighbors_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(std::size_t v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  bool has_edge(std::size_t a, std::size_t b) const noexcept {
    if (a >= node_count() || b >= node_count()) return false;
    const auto nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), static_cast<node_t>(b));
  }

  // Edges as (i, j) with i < j, in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (std::size_t i = 0; i < node_count(); ++i) {
      for (node_t j : neighbors(i)) {
        if (j > i) out.emplace_back(static_cast<node_t>(i), j);
      }
    }
    return out;
  }

  friend bool operator==(const VisibilityGraph&, const VisibilityGraph&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<node_t> neighbors_;
};

namespace detail {

inline void require_buildable(const TimeSeries& ts) {
  if (ts.size() < 2) throw error(errc::series_too_short, "visibility graph needs at least 2 points");
  if (ts.size() > std::size_t{UINT32_MAX}) throw error(errc::invalid_param, "series too long");
}

}  // namespace detail

// Reference builder: tests the visibility criterion against every
// intermediate point of every pair. Cubic in the worst case.
inline VisibilityGraph build_naive(const TimeSeries& ts) {
  detail::require_buildable(ts);
  const auto y = ts.values();
  const std::size_t n = y.size();
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      bool visible = true;
      for (std::size_t k = i + 1; k < j && visible; ++k) {
        visible = detail::strictly_below_chord(i, y[i], k, y[k], j, y[j]);
      }
      if (visible) edges.emplace_back(static_cast<node_t>(i), static_cast<node_t>(j));
    }
  }
  return VisibilityGraph(n, edges);
}

// Divide and conquer on the segment maximum. No edge can cross the (leftmost)
// maximum of a segment, so every edge has one endpoint at the maximum of the
// smallest segment containing both ends. The maximum's edges are found by one
// outward scan per side that tracks the steepest point seen so far.
inline VisibilityGraph build_fast(const TimeSeries& ts) {
  detail::require_buildable(ts);
  const auto y = ts.values();
  const std::size_t n = y.size();
  std::vector<Edge> edges;
  edges.reserve(4 * n);

  std::vector<std::pair<std::size_t, std::size_t>> stack;  // inclusive segments
  stack.emplace_back(0, n - 1);
  while (!stack.empty()) {
    const auto [lo, hi] = stack.back();
    stack.pop_back();
    if (lo >= hi) continue;

    std::size_t top = lo;
    for (std::size_t k = lo + 1; k <= hi; ++k) {
      if (y[k] > y[top]) top = k;
    }

    if (top < hi) {
      std::size_t steepest = top + 1;
      edges.emplace_back(static_cast<node_t>(top), static_cast<node_t>(steepest));
      for (std::size_t k = top + 2; k <= hi; ++k) {
        if (detail::strictly_below_chord(top, y[top], steepest, y[steepest], k, y[k])) {
          edges.emplace_back(static_cast<node_t>(top), static_cast<node_t>(k));
          steepest = k;
        }
      }
    }
    if (top > lo) {
      std::size_t steepest = top - 1;
      edges.emplace_back(static_cast<node_t>(steepest), static_cast<node_t>(top));
      for (std::size_t k = top - 1; k-- > lo;) {
        if (detail::strictly_below_chord(k, y[k], steepest, y[steepest], top, y[top])) {
          edges.emplace_back(static_cast<node_t>(k), static_cast<node_t>(top));
          steepest = k;
        }
      }
      stack.emplace_back(lo, top - 1);
    }
    if (top < hi) stack.emplace_back(top + 1, hi);
  }
  return VisibilityGraph(n, edges);
}

inline std::vector<std::size_t> degree_sequence(const VisibilityGraph& g) {
  std::vector<std::size_t> k(g.node_count());
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = g.degree(i);
  return k;
}

// One "i j" line per edge, i < j, lexicographic order.
inline void write_edge_list(std::ostream& out, const VisibilityGraph& g) {
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    for (node_t j : g.neighbors(i)) {
      if (j > i) out << i << ' ' << j << '\n';
    }
  }
}

}  // namespace tsnet
