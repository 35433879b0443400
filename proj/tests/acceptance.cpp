// Acceptance suite. Prints one line per criterion:
//   [PASS] / [FAIL] / [SKIP] AC<n> <title>: <measurements>
// Usage: tsnet_acceptance [criterion...]   (default: all)
// Exit status: 1 on any failure, 77 when everything selected was skipped.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "oracles.hpp"
#include "tsnet/dfa.hpp"
#include "tsnet/generators.hpp"
#include "tsnet/netstats.hpp"
#include "tsnet/report.hpp"
#include "tsnet/series.hpp"
#include "tsnet/visibility.hpp"

namespace fs = std::filesystem;
using namespace tsnet;

namespace {

enum class Outcome { pass, fail, skip };

struct Result {
  Outcome outcome = Outcome::pass;
  std::string detail;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Collects sub-checks; any failed check fails the criterion.
struct Checks {
  bool ok = true;
  std::ostringstream log;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      log << " FAILED{" << what << "}";
    }
  }
  void near(double got, double want, double tol, const std::string& what) {
    const bool good = std::abs(got - want) <= tol;
    log << " " << what << "=" << fmt("%.4f", got);
    if (!good) {
      ok = false;
      log << "(want " << fmt("%.4f", want) << "+-" << fmt("%.4g", tol) << ")";
    }
  }
  Result result() const { return {ok ? Outcome::pass : Outcome::fail, log.str()}; }
};

// --- 1 ---------------------------------------------------------------------

Result oracle_equivalence() {
  Clock clock;
  Checks c;
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> length(2, 2000);

  struct Family {
    GeneratorKind kind;
    double hurst;
  };
  const std::array<Family, 4> families{{{GeneratorKind::iid_uniform, 0.5},
                                        {GeneratorKind::iid_gaussian, 0.5},
                                        {GeneratorKind::fgn, 0.3},
                                        {GeneratorKind::fgn, 0.8}}};
  std::size_t checked = 0, mismatches = 0;
  for (std::size_t rep = 0; rep < 125; ++rep) {
    for (const auto& fam : families) {
      const auto ts = oracle::random_series(fam.kind, length(rng), rng(), fam.hurst);
      if (build_fast(ts) != build_naive(ts)) ++mismatches;
      ++checked;
    }
  }

  std::vector<std::vector<double>> fixtures;
  for (std::size_t n : {2, 3, 50, 777, 2000}) {
    std::vector<double> constant(n, 3.0), linear(n), convex(n), saw(n), spike(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i);
      linear[i] = 0.1 * t - 4.0;
      convex[i] = t * t;
      saw[i] = static_cast<double>(i % 5);
    }
    spike[n / 2] = 1e6;
    for (auto* v : {&constant, &linear, &convex, &saw, &spike}) fixtures.push_back(*v);
  }
  for (const auto& f : fixtures) {
    const auto ts = oracle::series(f);
    if (build_fast(ts) != build_naive(ts)) ++mismatches;
    ++checked;
  }

  const double secs = clock.seconds();
  c.log << fmt(" series=%zu mismatches=%zu time=%.1fs", checked, mismatches, secs);
  c.expect(checked >= 500 + fixtures.size(), "count");
  c.expect(mismatches == 0, "mismatches == 0");
  c.expect(secs < 120.0, "runtime < 120s");
  return c.result();
}

// --- 2 ---------------------------------------------------------------------

Result analytic_graphs() {
  Checks c;
  for (std::size_t n : {2, 5, 64, 1000}) {
    std::vector<double> lin(n), cvx(n);
    for (std::size_t i = 0; i < n; ++i) {
      lin[i] = 2.5 * static_cast<double>(i) + 1.0;
      cvx[i] = std::exp(0.01 * static_cast<double>(i));
    }
    const auto path = build_fast(oracle::series(lin));
    bool is_path = path.edge_count() == n - 1;
    for (std::size_t i = 0; i + 1 < n; ++i) is_path = is_path && path.has_edge(i, i + 1);
    c.expect(is_path, fmt("linear n=%zu is a path", n));

    const auto full = build_fast(oracle::series(cvx));
    c.expect(full.edge_count() == n * (n - 1) / 2, fmt("convex n=%zu is complete", n));
  }
  for (const auto& triple : {std::vector<double>{1, 2, 3}, std::vector<double>{0, 0, 0},
                             std::vector<double>{5, 3, 1}}) {
    const auto g = build_fast(oracle::series(triple));
    c.expect(!g.has_edge(0, 2) && g.edge_count() == 2, "collinear triple has no (0,2)");
  }
  c.log << (c.ok ? " linear->path, convex->complete, collinear triple blocked" : "");
  return c.result();
}

// --- 3 ---------------------------------------------------------------------

Result affine_invariance() {
  Checks c;
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> length(2, 1500);
  const std::array<GeneratorKind, 3> kinds{GeneratorKind::iid_uniform, GeneratorKind::iid_gaussian,
                                           GeneratorKind::fgn};
  std::size_t mismatches = 0, compared = 0;
  for (std::size_t s = 0; s < 100; ++s) {
    const auto ts = oracle::random_series(kinds[s % 3], length(rng), rng(), 0.7);
    const auto base = build_fast(ts);
    for (double a : {0.5, 3.0}) {
      for (double b : {-10.0, 7.0}) {
        std::vector<double> y(ts.values().begin(), ts.values().end());
        for (double& v : y) v = a * v + b;
        if (build_fast(oracle::series(y)) != base) ++mismatches;
        ++compared;
      }
    }
  }
  c.log << fmt(" comparisons=%zu mismatches=%zu", compared, mismatches);
  c.expect(mismatches == 0, "mismatches == 0");
  return c.result();
}

// --- 4 ---------------------------------------------------------------------

double mean_hurst(GeneratorKind kind, double h, std::size_t n) {
  double acc = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    DfaResult d = dfa(oracle::random_series(kind, n, seed, h), 2);
    acc += *d.hurst;
  }
  return acc / 10.0;
}

Result dfa_correctness() {
  Clock clock;
  Checks c;
  std::vector<double> lin(4096);
  for (std::size_t i = 0; i < lin.size(); ++i) lin[i] = 0.37 * static_cast<double>(i) - 12.0;
  const auto ts = oracle::series(lin);
  const DfaResult d = dfa_fluctuation(ts, default_dfa_scales(ts.size(), 2), 2);
  double rms = 0.0, mean = 0.0;
  for (double v : lin) mean += v;
  mean /= static_cast<double>(lin.size());
  double cum = 0.0;
  for (double v : lin) {
    cum += v - mean;
    rms += cum * cum;
  }
  rms = std::sqrt(rms / static_cast<double>(lin.size()));
  double worst = 0.0;
  for (double f : d.fluctuations) worst = std::max(worst, f / rms);
  c.log << fmt(" linear max F/rms=%.2e", worst);
  c.expect(worst <= 1e-9, "linear F <= 1e-9 relative");

  c.near(mean_hurst(GeneratorKind::iid_gaussian, 0.5, 16384), 0.5, 0.05, "H_iid");
  c.near(mean_hurst(GeneratorKind::fgn, 0.8, 16384), 0.8, 0.05, "H_fgn0.8");

  const double secs = clock.seconds();
  c.log << fmt(" time=%.1fs", secs);
  c.expect(secs < 60.0, "runtime < 60s");
  return c.result();
}

// --- 5 ---------------------------------------------------------------------

VisibilityGraph graph_of(std::size_t n, std::vector<Edge> e) { return VisibilityGraph(n, e); }

Result netstat_oracles() {
  Checks c;
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> length(3, 300);
  const std::array<GeneratorKind, 3> kinds{GeneratorKind::iid_uniform, GeneratorKind::iid_gaussian,
                                           GeneratorKind::fgn};
  double worst_c = 0.0, worst_r = 0.0, worst_l = 0.0;
  std::size_t graphs = 0;
  for (std::size_t s = 0; s < 60; ++s) {
    const auto ts = oracle::random_series(kinds[s % 3], length(rng), rng(), 0.75);
    const auto g = build_fast(ts);
    const auto a = oracle::adjacency(g);

    const auto cl = clustering(g);
    const auto cref = oracle::clustering(a);
    double avg = 0.0;
    for (std::size_t i = 0; i < cref.size(); ++i) {
      worst_c = std::max(worst_c, std::abs(cl.per_node[i] - cref[i]));
      avg += cref[i];
    }
    worst_c = std::max(worst_c, std::abs(cl.average - avg / static_cast<double>(cref.size())));
    worst_r = std::max(worst_r, std::abs(assortativity(g) - oracle::assortativity(a)));
    worst_l = std::max(worst_l, std::abs(all_pairs_average_path(g) - oracle::average_path(a)));
    ++graphs;
  }
  c.log << fmt(" graphs=%zu max|dC|=%.1e max|dr|=%.1e max|dL|=%.1e", graphs, worst_c, worst_r, worst_l);
  c.expect(worst_c <= 1e-9 && worst_r <= 1e-9 && worst_l <= 1e-9, "oracle agreement 1e-9");

  const auto star = graph_of(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}});
  c.near(assortativity(star), -1.0, 1e-9, "r_star");
  const auto k4 = graph_of(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  c.near(clustering(k4).average, 1.0, 1e-9, "C_K4");
  c.near(all_pairs_average_path(k4), 1.0, 1e-9, "L_K4");
  const auto p3 = graph_of(3, {{0, 1}, {1, 2}});
  c.near(all_pairs_average_path(p3), 4.0 / 3.0, 1e-9, "L_P3");
  c.near(assortativity(p3), -1.0, 1e-9, "r_P3");
  return c.result();
}

// --- 6 ---------------------------------------------------------------------

struct PublishedRow {
  const char* name;
  const char* file;
  const char* column;  // empty: headline "value"; else substring of a header
  std::size_t n;
  std::array<double, 7> table1;  // mean, median, min, max, std, skew, kurt
  double mean_k;
  std::size_t k_max, k_min;
  double gamma, c, r, hurst;
};

const std::array<PublishedRow, 4> kPublished{{
    {"EPU-US-D", "us-daily.csv", "", 12368, {100.93, 83.63, 3.32, 719.07, 68.43, 1.86, 5.95}, 6.99, 158, 2,
     2.78, 0.77, 0.12, 0.835},
    {"EPU-US-M", "us-monthly.csv", "", 407, {108.11, 102.20, 57.20, 245.13, 31.30, 0.96, 0.86}, 7.86, 56, 2,
     1.99, 0.76, 0.08, 0.915},
    {"EPU-US-News-M", "us-monthly.csv", "news", 407, {111.26, 102.02, 44.78, 283.67, 40.10, 1.27, 1.95}, 7.97,
     56, 2, 2.13, 0.77, 0.04, 0.801},
    {"EPU-CN-M", "cn-monthly.csv", "", 286, {143.75, 104.43, 9.07, 694.85, 117.16, 2.22, 5.32}, 8.06, 59, 2,
     1.83, 0.76, 0.07, 0.924},
}};

fs::path epu_dir() {
  if (const char* env = std::getenv("TSNET_EPU_DIR"); env && *env) return env;
  return fs::path(TSNET_TEST_DATA) / "epu";
}

std::optional<std::string> find_column(const fs::path& file, const char* needle) {
  if (!*needle) return std::string("value");
  std::ifstream in(file);
  std::string header;
  std::getline(in, header);
  for (const auto& name : detail::split_csv_line(header)) {
    if (detail::lower(detail::trim(name)).find(needle) != std::string::npos) return std::string(detail::trim(name));
  }
  return std::nullopt;
}

Result published_reproduction() {
  const fs::path dir = epu_dir();
  for (const auto& row : kPublished) {
    if (!fs::exists(dir / row.file)) {
      std::cerr << "warning: EPU data not available (" << (dir / row.file).string()
                << "); set TSNET_EPU_DIR to a directory populated by `tsnet fetch`\n";
      return {Outcome::skip, " data missing: " + (dir / row.file).string()};
    }
  }

  Checks c;
  for (const auto& row : kPublished) {
    const auto column = find_column(dir / row.file, row.column);
    if (!column) return {Outcome::skip, std::string(" no column matching '") + row.column + "' in " + row.file};
    std::ifstream in(dir / row.file);
    const TimeSeries full = from_csv(in, *column, row.name);
    if (full.size() < row.n) {
      std::cerr << "warning: " << row.name << " has " << full.size() << " rows, published vintage needs " << row.n
                << "\n";
      return {Outcome::skip, std::string(" vintage shorter than published for ") + row.name};
    }
    const TimeSeries ts = full.prefix(row.n);

    Clock clock;
    AnalysisConfig cfg;
    cfg.small_world = row.n == 12368;
    const AnalysisReport rep = analyze(ts, cfg);
    const double secs = clock.seconds();

    c.log << " | " << row.name;
    const auto& s = rep.summary;
    const std::array<double, 7> got{s.mean, s.median, s.min, s.max, s.std_dev, s.skewness.value_or(NAN),
                                    s.kurtosis.value_or(NAN)};
    const std::array<const char*, 7> names{"mean", "median", "min", "max", "std", "skew", "kurt"};
    c.near(static_cast<double>(s.n), static_cast<double>(row.n), 0.005 * static_cast<double>(row.n), "N");
    for (std::size_t i = 0; i < 7; ++i) c.near(got[i], row.table1[i], 0.005 * std::abs(row.table1[i]), names[i]);
    c.near(rep.graph.mean_degree, row.mean_k, 0.05, "<k>");
    c.near(static_cast<double>(rep.graph.k_max), static_cast<double>(row.k_max), 0.0, "k_max");
    c.near(static_cast<double>(rep.graph.k_min), static_cast<double>(row.k_min), 0.0, "k_min");
    c.near(rep.tail ? rep.tail->gamma : NAN, row.gamma, 0.15, "gamma");
    c.near(rep.clustering.average, row.c, 0.01, "C");
    c.near(rep.assortativity.value_or(NAN), row.r, 0.02, "r");
    c.near(rep.dfa && rep.dfa->hurst ? *rep.dfa->hurst : NAN, row.hurst, 0.05, "H");
    if (cfg.small_world) {
      c.near(rep.small_world ? rep.small_world->slope : NAN, 0.626, 0.05, "L_slope");
      c.near(rep.small_world ? rep.small_world->intercept : NAN, 0.405, 0.15, "L_intercept");
      c.log << fmt(" time=%.1fs", secs);
      c.expect(secs < 300.0, "daily pipeline < 300s");
    }
  }
  return c.result();
}

// --- 7 ---------------------------------------------------------------------

Result mean_degree() {
  Checks c;
  double acc = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = build_fast(oracle::random_series(GeneratorKind::iid_uniform, 10000, seed));
    acc += 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.node_count());
  }
  c.near(acc / 10.0, 4.0, 0.3, "mean<k>");
  return c.result();
}

// --- 8 ---------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Result determinism() {
  Checks c;
  const fs::path dir = fs::temp_directory_path() / fmt("tsnet_acceptance_%d", static_cast<int>(::getpid()));
  fs::create_directories(dir);
  const fs::path input = dir / "fixture.csv";
  {
    std::ofstream out(input);
    out << "t,value\n";
    const auto ts = oracle::random_series(GeneratorKind::fgn, 3000, 99, 0.8);
    for (std::size_t i = 0; i < ts.size(); ++i) out << i << "," << fmt("%.17g", ts.values()[i]) << "\n";
  }
  std::vector<std::string> reports;
  for (int threads : {1, 4, 4, 2}) {
    const fs::path report = dir / fmt("report_%zu.json", reports.size());
    const std::string cmd = fmt("TSNET_THREADS=%d '%s' analyze --input '%s' --small-world --report '%s'", threads,
                                TSNET_CLI_PATH, input.c_str(), report.c_str());
    const int rc = std::system(cmd.c_str());
    c.expect(rc == 0, fmt("analyze exit status (threads=%d)", threads));
    reports.push_back(slurp(report));
  }
  bool same = !reports.front().empty();
  for (const auto& r : reports) same = same && r == reports.front();
  c.log << fmt(" runs=%zu bytes=%zu identical=%s", reports.size(), reports.front().size(), same ? "yes" : "no");
  c.expect(same, "byte-identical reports");
  fs::remove_all(dir);
  return c.result();
}

struct Criterion {
  int id;
  const char* title;
  std::function<Result()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "oracle equivalence (fast vs naive)", oracle_equivalence},
      {2, "analytic graph cases", analytic_graphs},
      {3, "affine invariance", affine_invariance},
      {4, "DFA correctness", dfa_correctness},
      {5, "netstat oracles", netstat_oracles},
      {6, "reproduction of published EPU statistics", published_reproduction},
      {7, "iid_uniform mean degree 4.0 +- 0.3", mean_degree},
      {8, "determinism across thread counts", determinism},
  };
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

  int failures = 0, skips = 0, ran = 0;
  for (const auto& crit : all) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), crit.id) == wanted.end()) continue;
    Result r;
    try {
      r = crit.run();
    } catch (const std::exception& e) {
      r = {Outcome::fail, std::string(" exception: ") + e.what()};
    }
    const char* tag = r.outcome == Outcome::pass ? "PASS" : r.outcome == Outcome::fail ? "FAIL" : "SKIP";
    std::cout << "[" << tag << "] AC" << crit.id << " " << crit.title << ":" << r.detail << std::endl;
    ++ran;
    if (r.outcome == Outcome::fail) ++failures;
    if (r.outcome == Outcome::skip) ++skips;
  }
  if (failures > 0) return 1;
  return ran > 0 && skips == ran ? 77 : 0;
}
