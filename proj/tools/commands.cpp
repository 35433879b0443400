#include "commands.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "fetch.hpp"
#include "tsnet/dfa.hpp"
#include "tsnet/generators.hpp"
#include "tsnet/netstats.hpp"
#include "tsnet/report.hpp"
#include "tsnet/series.hpp"
#include "tsnet/visibility.hpp"

namespace tsnet::tools {

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

namespace {

namespace fs = std::filesystem;

// Command-line validation failures; mapped to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t parse_size(const std::string& text, const std::string& flag) {
  std::size_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw UsageError(flag + ": '" + text + "' is not a non-negative integer");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  return parts;
}

// "min:max:count" (log-spaced) or, when `allow_list`, "a,b,c".
std::vector<std::size_t> parse_grid(const std::string& text, const std::string& flag, bool allow_list) {
  const auto parts = split(text, ':');
  if (parts.size() == 3) {
    const auto lo = parse_size(parts[0], flag), hi = parse_size(parts[1], flag), count = parse_size(parts[2], flag);
    if (lo == 0 || hi < lo || count == 0) throw UsageError(flag + ": expected min:max:count with 0 < min <= max");
    return log_spaced_sizes(lo, hi, count);
  }
  if (allow_list && text.find(':') == std::string::npos) {
    std::vector<std::size_t> out;
    for (const auto& p : split(text, ',')) out.push_back(parse_size(p, flag));
    if (out.empty()) throw UsageError(flag + ": empty list");
    return out;
  }
  throw UsageError(flag + ": expected min:max:count" + std::string(allow_list ? " or a,b,c" : ""));
}

ScaleRange parse_range(const std::string& text, const std::string& flag) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw UsageError(flag + ": expected min:max");
  return {parse_size(parts[0], flag), parse_size(parts[1], flag)};
}

struct InputOptions {
  std::string input;
  std::string column = "value";
  std::string date_end;
};

void add_input_options(CLI::App* cmd, InputOptions& o) {
  cmd->add_option("--input", o.input, "CSV file with a header row")->required();
  cmd->add_option("--column", o.column, "Value column, by name or zero-based index")->capture_default_str();
  cmd->add_option("--date-end", o.date_end, "Drop observations dated after this (YYYY-MM or YYYY-MM-DD)");
}

TimeSeries load_series(const InputOptions& o) {
  std::ifstream in(o.input, std::ios::binary);
  if (!in) throw error(errc::io_error, "cannot open input file '" + o.input + "'");
  TimeSeries ts = from_csv(in, parse_column_ref(o.column));
  if (!o.date_end.empty()) ts = ts.until(o.date_end);
  return ts;
}

struct AnalysisOptions {
  int dfa_order = 2;
  std::string dfa_scales;
  std::string dfa_fit;
  std::size_t tail_kmin = 0;
  bool small_world = false;
  std::string prefix_sizes;
  double min_fit_r2 = 0.95;
  double min_clustering = 0.5;
  std::uint64_t seed = 0;
};

void add_analysis_options(CLI::App* cmd, AnalysisOptions& o) {
  cmd->add_option("--dfa-order", o.dfa_order, "Detrending polynomial order")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--dfa-scales", o.dfa_scales, "DFA window grid as min:max:count (log-spaced)");
  cmd->add_option("--dfa-fit", o.dfa_fit, "Restrict the Hurst fit to windows in min:max");
  cmd->add_option("--tail-kmin", o.tail_kmin, "Smallest degree in the power-law tail fit (default ceil(<k>))");
  cmd->add_flag("--small-world", o.small_world, "Also compute the growing-prefix L(N) curve");
  cmd->add_option("--prefix-sizes", o.prefix_sizes, "Prefix lengths as min:max:count or a,b,c");
  cmd->add_option("--sw-min-r2", o.min_fit_r2, "Small-world verdict: minimum R^2 of L vs ln N")->capture_default_str();
  cmd->add_option("--sw-min-clustering", o.min_clustering, "Small-world verdict: minimum average clustering")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Seed (echoed in the report)")->capture_default_str();
}

AnalysisConfig make_config(const InputOptions& in, const AnalysisOptions& o) {
  AnalysisConfig c;
  c.input = fs::path(in.input).filename().string();
  c.column = in.column;
  c.dfa_order = o.dfa_order;
  if (!o.dfa_scales.empty()) c.dfa_scales = parse_grid(o.dfa_scales, "--dfa-scales", false);
  if (!o.dfa_fit.empty()) c.dfa_fit_range = parse_range(o.dfa_fit, "--dfa-fit");
  if (o.tail_kmin > 0) c.tail_kmin = o.tail_kmin;
  c.small_world = o.small_world;
  if (!o.prefix_sizes.empty()) c.prefix_sizes = parse_grid(o.prefix_sizes, "--prefix-sizes", true);
  if (!in.date_end.empty()) c.date_end = in.date_end;
  c.seed = o.seed;
  c.thresholds = {o.min_fit_r2, o.min_clustering};
  return c;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw error(errc::io_error, "cannot write '" + path.string() + "'");
  f << text;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Visibility-graph analysis of univariate time series", "tsnet"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  InputOptions an_in;
  AnalysisOptions an_opts;
  std::string report_path;
  auto* analyze_cmd = app.add_subcommand("analyze", "Summary, DFA and network statistics as a JSON report");
  add_input_options(analyze_cmd, an_in);
  add_analysis_options(analyze_cmd, an_opts);
  analyze_cmd->add_option("--report", report_path, "Write the report here instead of stdout");

  InputOptions pd_in;
  AnalysisOptions pd_opts;
  std::string out_dir = ".";
  auto* plot_cmd = app.add_subcommand("plotdata", "Write (n,F(n)), (k,p(k)) and (N,L(N)) CSV files");
  add_input_options(plot_cmd, pd_in);
  add_analysis_options(plot_cmd, pd_opts);
  plot_cmd->add_option("--out-dir", out_dir, "Directory for dfa.csv, degree.csv and small_world.csv")->capture_default_str();

  InputOptions ed_in;
  std::string edges_out;
  bool naive = false;
  auto* edges_cmd = app.add_subcommand("edges", "Export the visibility graph as an 'i j' edge list");
  add_input_options(edges_cmd, ed_in);
  edges_cmd->add_option("--out", edges_out, "Output file (default stdout)");
  edges_cmd->add_flag("--naive", naive, "Use the quadratic-scan reference builder");

  std::string gen_kind;
  GeneratorSpec gen;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic series as CSV");
  gen_cmd->add_option("--kind", gen_kind,
                      "constant|linear|convex|sawtooth|periodic|iid_uniform|iid_gaussian|fgn")->required();
  gen_cmd->add_option("--n", gen.n, "Length")->required();
  gen_cmd->add_option("--seed", gen.seed, "Seed for stochastic kinds")->capture_default_str();
  gen_cmd->add_option("--hurst", gen.hurst, "Hurst exponent for fgn")->capture_default_str();
  gen_cmd->add_option("--value", gen.value, "Level for constant")->capture_default_str();
  gen_cmd->add_option("--slope", gen.slope, "Slope (linear) or curvature (convex)")->capture_default_str();
  gen_cmd->add_option("--intercept", gen.intercept, "Offset for linear and convex")->capture_default_str();
  gen_cmd->add_option("--period", gen.period, "Period for sawtooth and periodic")->capture_default_str();
  gen_cmd->add_option("--amplitude", gen.amplitude, "Amplitude for periodic")->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "Output CSV (default stdout)");

  std::string dataset;
  std::string url_override;
  std::string fetch_out = ".";
  std::string fetch_date_end;
  auto* fetch_cmd = app.add_subcommand("fetch", "Download a published EPU index and convert it to CSV");
  fetch_cmd->add_option("dataset", dataset, "us-daily | us-monthly | cn-monthly")
      ->required()
      ->check(CLI::IsMember({"us-daily", "us-monthly", "cn-monthly"}));
  fetch_cmd->add_option("--url-override", url_override, "Fetch from this URL (file:// allowed) instead");
  fetch_cmd->add_option("--out", fetch_out, "Output directory or .csv path")->capture_default_str();
  fetch_cmd->add_option("--date-end", fetch_date_end, "Drop observations dated after this");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "tsnet: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*analyze_cmd) {
      const AnalysisConfig cfg = make_config(an_in, an_opts);
      const TimeSeries ts = load_series(an_in);
      const std::string text = render_report(analyze(ts, cfg));
      if (report_path.empty()) {
        out << text;
      } else {
        write_text(report_path, text);
      }
    } else if (*plot_cmd) {
      const AnalysisConfig cfg = make_config(pd_in, pd_opts);
      const TimeSeries ts = load_series(pd_in);
      const fs::path dir(out_dir);

      try {
        auto scales = cfg.dfa_scales.value_or(default_dfa_scales(ts.size(), cfg.dfa_order));
        const DfaResult d = dfa_fluctuation(ts, std::move(scales), cfg.dfa_order);
        std::string csv = "n,F(n)\n";
        for (std::size_t i = 0; i < d.scales.size(); ++i) {
          csv += std::to_string(d.scales[i]) + "," + format_real(d.fluctuations[i]) + "\n";
        }
        write_text(dir / "dfa.csv", csv);
      } catch (const error& e) {
        err << "tsnet: skipping dfa.csv: " << e.what() << "\n";
      }

      const auto dist = degree_distribution(build_fast(ts));
      std::string csv = "k,p(k)\n";
      for (std::size_t i = 0; i < dist.support.size(); ++i) {
        csv += std::to_string(dist.support[i]) + "," + format_real(dist.pdf[i]) + "\n";
      }
      write_text(dir / "degree.csv", csv);

      if (cfg.small_world) {
        const auto curve = small_world_curve(ts, cfg.prefix_sizes.value_or(default_prefix_sizes(ts.size())));
        std::string sw = "N,L(N)\n";
        for (std::size_t i = 0; i < curve.sizes.size(); ++i) {
          sw += std::to_string(curve.sizes[i]) + "," + format_real(curve.lengths[i]) + "\n";
        }
        write_text(dir / "small_world.csv", sw);
      }
    } else if (*edges_cmd) {
      const TimeSeries ts = load_series(ed_in);
      const VisibilityGraph g = naive ? build_naive(ts) : build_fast(ts);
      std::ostringstream text;
      write_edge_list(text, g);
      if (edges_out.empty()) {
        out << text.str();
      } else {
        write_text(edges_out, text.str());
      }
    } else if (*gen_cmd) {
      const auto kind = parse_generator_kind(gen_kind);
      if (!kind) throw UsageError("--kind: unknown generator '" + gen_kind + "'");
      gen.kind = *kind;
      const TimeSeries ts = generate(gen);
      std::string csv = "t,value\n";
      for (std::size_t t = 0; t < ts.size(); ++t) csv += std::to_string(t) + "," + format_real(ts[t]) + "\n";
      if (gen_out.empty()) {
        out << csv;
      } else {
        write_text(gen_out, csv);
      }
    } else if (*fetch_cmd) {
      const auto d = parse_dataset(dataset);
      const auto res = fetch_dataset(*d, url_override.empty() ? std::nullopt : std::optional(url_override),
                                     fetch_out,
                                     fetch_date_end.empty() ? std::nullopt : std::optional(fetch_date_end));
      out << res.csv_path.string() << " (" << res.rows << " rows, sha256 " << res.sha256 << ")\n";
    }
  } catch (const UsageError& e) {
    err << "tsnet: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "tsnet: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace tsnet::tools
