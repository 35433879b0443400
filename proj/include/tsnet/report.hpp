#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "tsnet/dfa.hpp"
#include "tsnet/netstats.hpp"
#include "tsnet/series.hpp"
#include "tsnet/visibility.hpp"

namespace tsnet {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchema = "tsnet.report/1";

struct AnalysisConfig {
  std::string input;   // echoed only
  std::string column;  // echoed only
  int dfa_order = 2;
  std::optional<std::vector<std::size_t>> dfa_scales;
  std::optional<ScaleRange> dfa_fit_range;
  std::optional<std::size_t> tail_kmin;
  bool small_world = false;
  std::optional<std::vector<std::size_t>> prefix_sizes;
  std::optional<std::string> date_end;
  std::uint64_t seed = 0;
  SmallWorldThresholds thresholds;
};

struct GraphHeader {
  std::size_t n = 0;
  std::size_t m = 0;
  double mean_degree = 0.0;
  std::size_t k_min = 0;
  std::size_t k_max = 0;
};

// One analysed series. Stages that are legal to fail on degenerate input
// (DFA, tail fit, assortativity, small-world) leave their field empty and
// record the reason in `notes`.
struct AnalysisReport {
  std::string label;
  AnalysisConfig config;
  SummaryStats summary;
  std::optional<DfaResult> dfa;
  GraphHeader graph;
  DegreeDistribution degrees;
  std::optional<DegreeTailFit> tail;
  ClusteringReport clustering;
  std::optional<double> assortativity;
  std::optional<SmallWorldCurve> small_world;
  std::optional<bool> small_world_verdict;
  std::vector<std::string> notes;
};

inline AnalysisReport analyze(const TimeSeries& ts, const AnalysisConfig& config) {
  AnalysisReport rep;
  rep.label = ts.label();
  rep.config = config;
  rep.summary = summary(ts);

  try {
    auto scales = config.dfa_scales.value_or(default_dfa_scales(ts.size(), config.dfa_order));
    DfaResult d = dfa_fluctuation(ts, std::move(scales), config.dfa_order);
    hurst(d, config.dfa_fit_range);
    rep.dfa = std::move(d);
  } catch (const error& e) {
    rep.notes.push_back(std::string("dfa: ") + e.what());
  }

  const VisibilityGraph g = build_fast(ts);
  rep.graph.n = g.node_count();
  rep.graph.m = g.edge_count();
  rep.graph.mean_degree = 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.node_count());
  rep.degrees = degree_distribution(g);
  rep.graph.k_min = rep.degrees.support.front();
  rep.graph.k_max = rep.degrees.support.back();

  try {
    std::optional<DegreeRange> range;
    if (config.tail_kmin) range = DegreeRange{*config.tail_kmin, rep.graph.k_max};
    rep.tail = fit_powerlaw_tail(rep.degrees, range);
  } catch (const error& e) {
    rep.notes.push_back(std::string("tail: ") + e.what());
  }

  rep.clustering = clustering(g);

  try {
    rep.assortativity = assortativity(g);
  } catch (const error& e) {
    rep.notes.push_back(std::string("assortativity: ") + e.what());
  }

  if (config.small_world) {
    try {
      auto sizes = config.prefix_sizes.value_or(default_prefix_sizes(ts.size()));
      rep.small_world = small_world_curve(ts, std::move(sizes));
      rep.small_world_verdict = small_world_verdict(*rep.small_world, rep.clustering.average, config.thresholds);
      if (rep.small_world->degenerate_slope) rep.notes.push_back("small_world: degenerate (flat) L(N) curve");
    } catch (const error& e) {
      rep.notes.push_back(std::string("small_world: ") + e.what());
    }
  }
  return rep;
}

namespace detail {

// Six decimal places; the serializer then prints the shortest round-trip
// form, which makes the output byte-stable.
inline nlohmann::json fixed6(double v) {
  const double r = std::round(v * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;  // no "-0.0"
}

inline nlohmann::json fixed6(const std::optional<double>& v) { return v ? fixed6(*v) : nlohmann::json(nullptr); }

}  // namespace detail

// Keys are emitted sorted (nlohmann's default object map).
inline nlohmann::json to_json(const AnalysisReport& rep) {
  using nlohmann::json;
  using detail::fixed6;
  json j;
  j["schema_version"] = kReportSchema;
  j["tool_version"] = kToolVersion;
  j["label"] = rep.label;

  const auto& c = rep.config;
  json cfg;
  cfg["input"] = c.input;
  cfg["column"] = c.column;
  cfg["dfa_order"] = c.dfa_order;
  cfg["dfa_scales"] = c.dfa_scales ? json(*c.dfa_scales) : json("default");
  cfg["dfa_fit_range"] = c.dfa_fit_range ? json{c.dfa_fit_range->first, c.dfa_fit_range->second} : json("all");
  cfg["tail_kmin"] = c.tail_kmin ? json(*c.tail_kmin) : json("ceil_mean_degree");
  cfg["small_world"] = c.small_world;
  cfg["prefix_sizes"] = c.prefix_sizes ? json(*c.prefix_sizes) : json("default");
  cfg["date_end"] = c.date_end ? json(*c.date_end) : json(nullptr);
  cfg["seed"] = c.seed;
  cfg["small_world_min_fit_r2"] = fixed6(c.thresholds.min_fit_r2);
  cfg["small_world_min_clustering"] = fixed6(c.thresholds.min_clustering);
  j["config"] = cfg;

  const auto& s = rep.summary;
  j["summary"] = {{"n", s.n},
                  {"mean", fixed6(s.mean)},
                  {"median", fixed6(s.median)},
                  {"min", fixed6(s.min)},
                  {"max", fixed6(s.max)},
                  {"std_dev", fixed6(s.std_dev)},
                  {"std_dev_estimator", "sample_n_minus_1"},
                  {"skewness", fixed6(s.skewness)},
                  {"kurtosis", fixed6(s.kurtosis)},
                  {"kurtosis_convention", "excess"}};

  if (rep.dfa) {
    const auto& d = *rep.dfa;
    j["dfa"] = {{"order", d.order},
                {"hurst", fixed6(d.hurst)},
                {"fit_r2", fixed6(d.fit_r2)},
                {"fit_range", {d.fit_range.first, d.fit_range.second}},
                {"scale_count", d.scales.size()},
                {"persistence", d.hurst ? json(std::string(to_string(classify_persistence(*d.hurst)))) : json(nullptr)}};
  } else {
    j["dfa"] = nullptr;
  }

  j["graph"] = {{"n", rep.graph.n},
                {"m", rep.graph.m},
                {"mean_degree", fixed6(rep.graph.mean_degree)},
                {"k_min", rep.graph.k_min},
                {"k_max", rep.graph.k_max}};

  if (rep.tail) {
    j["tail"] = {{"gamma", fixed6(rep.tail->gamma)},
                 {"r2", fixed6(rep.tail->r2)},
                 {"k_range", {rep.tail->k_range.first, rep.tail->k_range.second}},
                 {"points", rep.tail->points}};
  } else {
    j["tail"] = nullptr;
  }

  j["clustering"] = {{"average", fixed6(rep.clustering.average)},
                     {"c_max", fixed6(rep.clustering.c_max)},
                     {"c_min", fixed6(rep.clustering.c_min)}};
  j["assortativity"] = fixed6(rep.assortativity);

  if (rep.small_world) {
    const auto& w = *rep.small_world;
    j["small_world"] = {{"prefix_count", w.sizes.size()},
                        {"size_range", {w.sizes.front(), w.sizes.back()}},
                        {"slope", fixed6(w.slope)},
                        {"intercept", fixed6(w.intercept)},
                        {"r2", fixed6(w.r2)},
                        {"degenerate_slope", w.degenerate_slope},
                        {"verdict", rep.small_world_verdict.value_or(false)}};
  } else {
    j["small_world"] = nullptr;
  }
  j["notes"] = rep.notes;
  return j;
}

inline std::string render_report(const AnalysisReport& rep) { return to_json(rep).dump(2) + "\n"; }

}  // namespace tsnet
