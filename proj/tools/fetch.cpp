#include "fetch.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <memory>

#include <curl/curl.h>
#include <openssl/evp.h>

#include "json.hpp"

#include "tsnet/error.hpp"
#include "tsnet/report.hpp"
#include "tsnet/series.hpp"

namespace tsnet::tools {

std::optional<Dataset> parse_dataset(std::string_view name) {
  if (name == "us-daily") return Dataset::us_daily;
  if (name == "us-monthly") return Dataset::us_monthly;
  if (name == "cn-monthly") return Dataset::cn_monthly;
  return std::nullopt;
}

std::string_view dataset_name(Dataset d) {
  switch (d) {
    case Dataset::us_daily: return "us-daily";
    case Dataset::us_monthly: return "us-monthly";
    case Dataset::cn_monthly: return "cn-monthly";
  }
  return "unknown";
}

std::string_view default_url(Dataset d) {
  switch (d) {
    case Dataset::us_daily: return "https://www.policyuncertainty.com/media/All_Daily_Policy_Data.csv";
    case Dataset::us_monthly: return "https://www.policyuncertainty.com/media/US_Policy_Uncertainty_Data.xlsx";
    case Dataset::cn_monthly: return "https://www.policyuncertainty.com/media/SCMP_China_Policy_Uncertainty_Data.xlsx";
  }
  return {};
}

namespace {

std::size_t append_body(char* ptr, std::size_t size, std::size_t nmemb, void* userdata) {
  static_cast<std::string*>(userdata)->append(ptr, size * nmemb);
  return size * nmemb;
}

struct CurlCleanup {
  void operator()(CURL* c) const noexcept { curl_easy_cleanup(c); }
};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string sanitize(std::string_view s) {
  std::string out;
  for (char c : lower(detail::trim(s))) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out.push_back(c);
    } else if (!out.empty() && out.back() != '_') {
      out.push_back('_');
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "column" : out;
}

// Integer-valued cell, tolerating spreadsheet forms such as "1985.0".
std::optional<long> integer_cell(std::string_view s) {
  const auto v = detail::parse_real(s);
  if (!v || *v != static_cast<double>(static_cast<long>(*v))) return std::nullopt;
  return static_cast<long>(*v);
}

std::string two_digits(long v) { return (v < 10 ? "0" : "") + std::to_string(v); }

}  // namespace

std::string download(const std::string& url) {
  static const bool initialized = [] { return curl_global_init(CURL_GLOBAL_DEFAULT) == CURLE_OK; }();
  if (!initialized) throw error(errc::network_error, "libcurl initialization failed");
  std::unique_ptr<CURL, CurlCleanup> curl(curl_easy_init());
  if (!curl) throw error(errc::network_error, "cannot create a curl handle");
  std::string body;
  char message[CURL_ERROR_SIZE] = {0};
  curl_easy_setopt(curl.get(), CURLOPT_URL, url.c_str());
  curl_easy_setopt(curl.get(), CURLOPT_FOLLOWLOCATION, 1L);
  curl_easy_setopt(curl.get(), CURLOPT_FAILONERROR, 1L);
  curl_easy_setopt(curl.get(), CURLOPT_CONNECTTIMEOUT, 30L);
  curl_easy_setopt(curl.get(), CURLOPT_TIMEOUT, 300L);
  curl_easy_setopt(curl.get(), CURLOPT_USERAGENT, "tsnet/0.1");
  curl_easy_setopt(curl.get(), CURLOPT_ERRORBUFFER, message);
  curl_easy_setopt(curl.get(), CURLOPT_WRITEFUNCTION, append_body);
  curl_easy_setopt(curl.get(), CURLOPT_WRITEDATA, &body);
  const CURLcode rc = curl_easy_perform(curl.get());
  if (rc != CURLE_OK) {
    throw error(errc::network_error, url + ": " + (message[0] ? message : curl_easy_strerror(rc)));
  }
  return body;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw error(errc::io_error, "SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

RawFormat sniff_format(std::string_view raw) {
  if (raw.substr(0, 4) == std::string_view("PK\x03\x04", 4)) return RawFormat::xlsx;
  const std::string head = lower(raw.substr(0, 512));
  if (head.find("<html") != std::string::npos || head.find("<!doctype") != std::string::npos) {
    throw error(errc::unrecognized_format, "received an HTML page instead of data");
  }
  return RawFormat::csv;
}

ConvertedSeries convert_table(const Table& table, std::string format) {
  std::size_t header_row = table.size();
  std::optional<std::size_t> year_col, month_col, day_col;
  for (std::size_t r = 0; r < table.size() && header_row == table.size(); ++r) {
    for (std::size_t c = 0; c < table[r].size(); ++c) {
      const std::string h = lower(detail::trim(table[r][c]));
      if (h == "year") {
        header_row = r;
        year_col = c;
      }
    }
  }
  if (!year_col) throw error(errc::unrecognized_format, "no header row with a 'year' column");
  const auto& header = table[header_row];
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string h = lower(detail::trim(header[c]));
    if (h == "month") month_col = c;
    if (h == "day") day_col = c;
  }
  if (!month_col) throw error(errc::unrecognized_format, "no 'month' column");

  std::vector<std::size_t> value_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c == *year_col || c == *month_col || (day_col && c == *day_col)) continue;
    if (detail::trim(header[c]).empty()) continue;
    value_cols.push_back(c);
  }
  if (value_cols.empty()) throw error(errc::unrecognized_format, "no index columns");

  ConvertedSeries out;
  out.format = std::move(format);
  out.columns.push_back("date");
  out.columns.push_back("value");
  for (std::size_t i = 1; i < value_cols.size(); ++i) {
    std::string name = sanitize(header[value_cols[i]]);
    while (std::find(out.columns.begin(), out.columns.end(), name) != out.columns.end()) name += "_";
    out.columns.push_back(std::move(name));
  }

  auto cell = [](const std::vector<std::string>& row, std::size_t c) -> std::string_view {
    return c < row.size() ? detail::trim(row[c]) : std::string_view{};
  };
  for (std::size_t r = header_row + 1; r < table.size(); ++r) {
    const auto& row = table[r];
    const auto year = integer_cell(cell(row, *year_col));
    const auto month = integer_cell(cell(row, *month_col));
    if (!year || !month) continue;
    if (*month < 1 || *month > 12) throw error(errc::unrecognized_format, "month out of range in row " + std::to_string(r + 1));
    std::string date = std::to_string(*year) + "-" + two_digits(*month);
    if (day_col) {
      const auto day = integer_cell(cell(row, *day_col));
      if (!day || *day < 1 || *day > 31) continue;
      date += "-" + two_digits(*day);
    }
    std::vector<std::string> values{date};
    bool headline = true;
    for (const std::size_t c : value_cols) {
      const std::string_view text = cell(row, c);
      if (text.empty()) {
        if (headline) break;
        values.emplace_back();
      } else {
        const auto v = detail::parse_real(text);
        if (!v) throw error(errc::unrecognized_format, "non-numeric index value '" + std::string(text) + "'");
        values.emplace_back(text);
      }
      headline = false;
    }
    if (values.size() != out.columns.size()) continue;  // blank headline
    out.rows.push_back(std::move(values));
  }
  if (out.rows.empty()) throw error(errc::unrecognized_format, "no data rows");
  std::sort(out.rows.begin(), out.rows.end());
  return out;
}

ConvertedSeries convert_epu(std::string_view raw) {
  if (sniff_format(raw) == RawFormat::xlsx) return convert_table(read_xlsx_first_sheet(raw), "xlsx");
  Table table;
  std::size_t start = 0;
  while (start < raw.size()) {
    std::size_t end = raw.find('\n', start);
    if (end == std::string_view::npos) end = raw.size();
    std::string_view line = raw.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (table.empty() && line.size() >= 3 && line.substr(0, 3) == "\xEF\xBB\xBF") line.remove_prefix(3);
    table.push_back(detail::split_csv_line(line));
    start = end + 1;
  }
  return convert_table(table, "csv");
}

void truncate_until(ConvertedSeries& s, std::string_view date_end) {
  std::erase_if(s.rows, [&](const std::vector<std::string>& row) {
    return std::string_view(row.front()).substr(0, date_end.size()) > date_end;
  });
}

std::string to_csv(const ConvertedSeries& s) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out.push_back(',');
      out += cells[i];
    }
    out.push_back('\n');
  };
  line(s.columns);
  for (const auto& r : s.rows) line(r);
  return out;
}

FetchResult fetch_dataset(Dataset d, const std::optional<std::string>& url_override,
                          const std::filesystem::path& out, const std::optional<std::string>& date_end) {
  namespace fs = std::filesystem;
  const std::string url = url_override.value_or(std::string(default_url(d)));
  const std::string raw = download(url);
  ConvertedSeries series = convert_epu(raw);
  if (date_end) truncate_until(series, *date_end);
  if (series.rows.empty()) throw error(errc::unrecognized_format, "no rows left after --date-end");

  FetchResult res;
  if (out.extension() == ".csv") {
    res.csv_path = out;
  } else {
    res.csv_path = out / (std::string(dataset_name(d)) + ".csv");
  }
  res.manifest_path = res.csv_path;
  res.manifest_path.replace_extension(".manifest.json");
  if (res.csv_path.has_parent_path()) fs::create_directories(res.csv_path.parent_path());

  res.sha256 = sha256_hex(raw);
  res.rows = series.rows.size();

  std::ofstream csv(res.csv_path, std::ios::binary);
  if (!csv) throw error(errc::io_error, "cannot write " + res.csv_path.string());
  csv << to_csv(series);

  nlohmann::json manifest = {{"dataset", dataset_name(d)},
                             {"url", url},
                             {"raw_sha256", res.sha256},
                             {"raw_bytes", raw.size()},
                             {"raw_format", series.format},
                             {"rows", series.rows.size()},
                             {"columns", series.columns},
                             {"first_date", series.rows.front().front()},
                             {"last_date", series.rows.back().front()},
                             {"date_end", date_end ? nlohmann::json(*date_end) : nlohmann::json(nullptr)},
                             {"tool_version", kToolVersion}};
  std::ofstream mf(res.manifest_path, std::ios::binary);
  if (!mf) throw error(errc::io_error, "cannot write " + res.manifest_path.string());
  mf << manifest.dump(2) << "\n";
  return res;
}

}  // namespace tsnet::tools
