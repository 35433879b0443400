#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tsnet/error.hpp"

namespace tsnet {

// Univariate series sampled at implicit positions 0..N-1. Calendar dates, when
// present, are carried for truncation and provenance only.
class TimeSeries {
 public:
  TimeSeries() = default;

  explicit TimeSeries(std::vector<double> values, std::string label = {},
                      std::optional<std::vector<std::string>> timestamps = std::nullopt)
      : values_(std::move(values)), label_(std::move(label)), timestamps_(std::move(timestamps)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i])) {
        throw error(errc::invalid_series, "value at position " + std::to_string(i) + " is not finite");
      }
    }
    if (timestamps_) {
      if (timestamps_->size() != values_.size()) {
        throw error(errc::invalid_series, "timestamp count does not match value count");
      }
      for (std::size_t i = 1; i < timestamps_->size(); ++i) {
        if (!((*timestamps_)[i - 1] < (*timestamps_)[i])) {
          throw error(errc::invalid_series,
                      "timestamps not strictly increasing at position " + std::to_string(i));
        }
      }
    }
  }

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::string& label() const noexcept { return label_; }
  const std::optional<std::vector<std::string>>& timestamps() const noexcept { return timestamps_; }

  // First n observations.
  TimeSeries prefix(std::size_t n) const {
    n = std::min(n, values_.size());
    std::optional<std::vector<std::string>> ts;
    if (timestamps_) ts.emplace(timestamps_->begin(), timestamps_->begin() + static_cast<std::ptrdiff_t>(n));
    return TimeSeries(std::vector<double>(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(n)),
                      label_, std::move(ts));
  }

  // Keeps observations whose date, compared at the precision of `date_end`,
  // is not after it: "2018-11" keeps "2018-11-30" and drops "2018-12-01".
  TimeSeries until(std::string_view date_end) const {
    if (!timestamps_) throw error(errc::invalid_param, "series has no date column to truncate on");
    std::size_t n = 0;
    while (n < values_.size() &&
           std::string_view((*timestamps_)[n]).substr(0, date_end.size()) <= date_end) {
      ++n;
    }
    return prefix(n);
  }

  TimeSeries with_label(std::string label) const {
    TimeSeries copy = *this;
    copy.label_ = std::move(label);
    return copy;
  }

 private:
  std::vector<double> values_;
  std::string label_;
  std::optional<std::vector<std::string>> timestamps_;
};

struct SummaryStats {
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
  double std_dev = 0.0;              // sample estimator, N-1 denominator
  std::optional<double> skewness;    // adjusted Fisher-Pearson G1
  std::optional<double> kurtosis;    // excess, adjusted G2 (normal = 0)
};

inline SummaryStats summary(const TimeSeries& ts) {
  if (ts.empty()) throw error(errc::empty_series, "summary of an empty series");
  const auto v = ts.values();
  const std::size_t n = v.size();
  const double nd = static_cast<double>(n);

  SummaryStats s;
  s.n = n;
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / nd;

  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end());
  s.min = sorted.front();
  s.max = sorted.back();
  s.median = (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  // Rounding in the mean must not push it outside [min, max].
  s.mean = std::clamp(s.mean, s.min, s.max);

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : v) {
    const double d = x - s.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  if (n > 1) s.std_dev = std::sqrt(m2 / (nd - 1.0));
  if (s.min == s.max) {
    s.std_dev = 0.0;
    return s;
  }
  m2 /= nd;
  m3 /= nd;
  m4 /= nd;
  if (n >= 3) {
    const double g1 = m3 / std::pow(m2, 1.5);
    s.skewness = g1 * std::sqrt(nd * (nd - 1.0)) / (nd - 2.0);
  }
  if (n >= 4) {
    const double g2 = m4 / (m2 * m2) - 3.0;
    s.kurtosis = ((nd + 1.0) * g2 + 6.0) * (nd - 1.0) / ((nd - 2.0) * (nd - 3.0));
  }
  return s;
}

// Column selector for CSV ingestion: header name or zero-based index.
using ColumnRef = std::variant<std::string, std::size_t>;

// Digits-only text selects by index, anything else by name.
inline ColumnRef parse_column_ref(std::string_view text) {
  if (!text.empty() && std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isdigit(c); })) {
    std::size_t idx = 0;
    std::from_chars(text.data(), text.data() + text.size(), idx);
    return idx;
  }
  return std::string(text);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Splits one CSV record. Double-quoted fields may contain commas and "" escapes.
inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

inline std::optional<double> parse_real(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

// YYYY-MM or YYYY-MM-DD; these order correctly as plain strings.
inline bool is_iso_date(std::string_view s) {
  auto digits = [&](std::size_t from, std::size_t count) {
    for (std::size_t i = from; i < from + count; ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
  };
  if (s.size() == 7) return digits(0, 4) && s[4] == '-' && digits(5, 2);
  if (s.size() == 10) return digits(0, 4) && s[4] == '-' && digits(5, 2) && s[7] == '-' && digits(8, 2);
  return false;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace detail

// Reads one numeric column from a headed, comma-delimited CSV stream. A
// column named "date" holding ISO dates is attached as timestamps. Blank
// lines are ignored; any other row whose target cell is not a finite real
// fails the whole read.
inline TimeSeries from_csv(std::istream& in, const ColumnRef& column, std::string label = {}) {
  std::string line;
  if (!std::getline(in, line)) throw error(errc::empty_series, "input has no header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = detail::split_csv_line(line);
  for (auto& h : header) h = std::string(detail::trim(h));

  std::size_t target = 0;
  if (const auto* name = std::get_if<std::string>(&column)) {
    const auto it = std::find(header.begin(), header.end(), *name);
    if (it == header.end()) throw error(errc::missing_column, "no column named '" + *name + "'");
    target = static_cast<std::size_t>(it - header.begin());
  } else {
    target = std::get<std::size_t>(column);
    if (target >= header.size()) {
      throw error(errc::missing_column, "column index " + std::to_string(target) + " out of range (" +
                                            std::to_string(header.size()) + " columns)");
    }
  }
  if (label.empty()) label = header[target];

  std::optional<std::size_t> date_col;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != target && detail::lower(header[c]) == "date") {
      date_col = c;
      break;
    }
  }

  std::vector<double> values;
  std::vector<std::string> dates;
  bool dates_ok = date_col.has_value();
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_csv_line(line);
    if (target >= fields.size()) throw parse_error(row, "missing value cell");
    const auto value = detail::parse_real(fields[target]);
    if (!value) throw parse_error(row, "cannot parse '" + fields[target] + "' as a finite real");
    values.push_back(*value);
    if (dates_ok) {
      const auto d = *date_col < fields.size() ? detail::trim(fields[*date_col]) : std::string_view{};
      if (detail::is_iso_date(d)) {
        dates.emplace_back(d);
      } else {
        dates_ok = false;
      }
    }
  }
  if (values.empty()) throw error(errc::empty_series, "no data rows");
  std::optional<std::vector<std::string>> ts;
  if (dates_ok) ts = std::move(dates);
  return TimeSeries(std::move(values), std::move(label), std::move(ts));
}

inline TimeSeries from_csv(std::string_view text, const ColumnRef& column, std::string label = {}) {
  std::istringstream in{std::string(text)};
  return from_csv(in, column, std::move(label));
}

}  // namespace tsnet
