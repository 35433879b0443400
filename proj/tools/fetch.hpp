#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xlsx.hpp"

namespace tsnet::tools {

enum class Dataset { us_daily, us_monthly, cn_monthly };

std::optional<Dataset> parse_dataset(std::string_view name);
std::string_view dataset_name(Dataset d);

// Published download location. Configuration, not contract: the site layout
// changes, which is what --url-override is for.
std::string_view default_url(Dataset d);

// Whole body of a URL (http, https or file) through libcurl.
std::string download(const std::string& url);

std::string sha256_hex(std::string_view bytes);

// Series converted to the tool's CSV layout: a `date` column (YYYY-MM or
// YYYY-MM-DD) followed by `value` (the headline index) and any further index
// columns under sanitized names.
struct ConvertedSeries {
  std::vector<std::string> columns;  // includes "date"
  std::vector<std::vector<std::string>> rows;
  std::string format;  // "csv" or "xlsx"
};

// Recognizes the CSV and xlsx layouts of the published indices: a header
// row with year and month (and day for daily data) columns followed by one
// or more numeric index columns. Rows without a numeric year (footnotes) are
// skipped, as are rows whose headline value is blank.
ConvertedSeries convert_epu(std::string_view raw);

enum class RawFormat { csv, xlsx };
RawFormat sniff_format(std::string_view raw);

ConvertedSeries convert_table(const Table& table, std::string format);

void truncate_until(ConvertedSeries& s, std::string_view date_end);

std::string to_csv(const ConvertedSeries& s);

struct FetchResult {
  std::filesystem::path csv_path;
  std::filesystem::path manifest_path;
  std::string sha256;
  std::size_t rows = 0;
};

// Downloads, converts and writes `<dataset>.csv` plus `<dataset>.manifest.json`
// into `out` (a directory), or to `out` itself when it names a .csv file.
FetchResult fetch_dataset(Dataset d, const std::optional<std::string>& url_override,
                          const std::filesystem::path& out, const std::optional<std::string>& date_end);

}  // namespace tsnet::tools
