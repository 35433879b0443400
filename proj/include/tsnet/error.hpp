#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tsnet {

enum class errc {
  missing_column,
  parse_error,
  empty_series,
  invalid_series,
  series_too_short,
  scale_out_of_range,
  degenerate_fit,
  insufficient_tail_points,
  zero_degree_variance,
  disconnected_graph,
  invalid_param,
  network_error,
  unrecognized_format,
  io_error,
};

constexpr std::string_view to_string(errc code) noexcept {
  switch (code) {
    case errc::missing_column: return "MissingColumn";
    case errc::parse_error: return "ParseError";
    case errc::empty_series: return "EmptySeries";
    case errc::invalid_series: return "InvalidSeries";
    case errc::series_too_short: return "SeriesTooShort";
    case errc::scale_out_of_range: return "ScaleOutOfRange";
    case errc::degenerate_fit: return "DegenerateFit";
    case errc::insufficient_tail_points: return "InsufficientTailPoints";
    case errc::zero_degree_variance: return "ZeroDegreeVariance";
    case errc::disconnected_graph: return "DisconnectedGraph";
    case errc::invalid_param: return "InvalidParam";
    case errc::network_error: return "NetworkError";
    case errc::unrecognized_format: return "UnrecognizedFormat";
    case errc::io_error: return "IoError";
  }
  return "Unknown";
}

// All library failures are reported through this type; code() identifies the
// failure class and what() carries a human-readable diagnostic.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

// Raised by CSV ingestion; row() is the 1-based line number in the file
// (the header is line 1).
class parse_error : public error {
 public:
  parse_error(std::size_t row, const std::string& message)
      : error(errc::parse_error, "row " + std::to_string(row) + ": " + message), row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

}  // namespace tsnet
