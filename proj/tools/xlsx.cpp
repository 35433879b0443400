#include "xlsx.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <map>

#include <zlib.h>

#include "tsnet/error.hpp"

namespace tsnet::tools {
namespace {

[[noreturn]] void bad(const std::string& what) { throw error(errc::unrecognized_format, "xlsx: " + what); }

std::uint32_t le32(std::string_view b, std::size_t at) {
  if (at + 4 > b.size()) bad("truncated archive");
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[at + static_cast<std::size_t>(i)]);
  return v;
}

std::uint16_t le16(std::string_view b, std::size_t at) {
  if (at + 2 > b.size()) bad("truncated archive");
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) |
                                    (static_cast<unsigned char>(b[at + 1]) << 8));
}

struct Member {
  std::string name;
  std::uint16_t method = 0;
  std::uint32_t compressed = 0;
  std::uint32_t uncompressed = 0;
  std::uint32_t local_offset = 0;
};

std::vector<Member> central_directory(std::string_view a) {
  constexpr std::uint32_t kEnd = 0x06054b50, kEntry = 0x02014b50;
  if (a.size() < 22) bad("too small to be an archive");
  std::size_t eocd = std::string_view::npos;
  const std::size_t stop = a.size() > 22 + 65535 ? a.size() - 22 - 65535 : 0;
  for (std::size_t p = a.size() - 22 + 1; p-- > stop;) {
    if (le32(a, p) == kEnd) {
      eocd = p;
      break;
    }
  }
  if (eocd == std::string_view::npos) bad("no end-of-central-directory record");
  const std::uint16_t count = le16(a, eocd + 10);
  std::size_t p = le32(a, eocd + 16);
  std::vector<Member> out;
  for (std::uint16_t i = 0; i < count; ++i) {
    if (le32(a, p) != kEntry) bad("corrupt central directory");
    Member m;
    m.method = le16(a, p + 10);
    m.compressed = le32(a, p + 20);
    m.uncompressed = le32(a, p + 24);
    const std::uint16_t name_len = le16(a, p + 28);
    const std::uint16_t extra_len = le16(a, p + 30);
    const std::uint16_t comment_len = le16(a, p + 32);
    m.local_offset = le32(a, p + 42);
    if (p + 46 + name_len > a.size()) bad("truncated central directory");
    m.name = std::string(a.substr(p + 46, name_len));
    out.push_back(std::move(m));
    p += 46u + name_len + extra_len + comment_len;
  }
  return out;
}

std::string inflate_raw(std::string_view data, std::size_t expected) {
  std::string out(expected, '\0');
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) bad("zlib init failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = inflate(&zs, Z_FINISH);
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || zs.total_out != expected) bad("deflate stream is corrupt");
  return out;
}

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out.push_back(s[i]);
      continue;
    }
    const std::size_t semi = s.find(';', i);
    if (semi == std::string_view::npos) {
      out.push_back('&');
      continue;
    }
    const std::string_view ent = s.substr(i + 1, semi - i - 1);
    if (ent == "amp") out.push_back('&');
    else if (ent == "lt") out.push_back('<');
    else if (ent == "gt") out.push_back('>');
    else if (ent == "quot") out.push_back('"');
    else if (ent == "apos") out.push_back('\'');
    else if (!ent.empty() && ent[0] == '#') {
      const bool hex = ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X');
      const unsigned long cp = std::stoul(std::string(ent.substr(hex ? 2 : 1)), nullptr, hex ? 16 : 10);
      if (cp < 0x80) out.push_back(static_cast<char>(cp));  // non-ASCII code points are dropped
    } else {
      out.append(s.substr(i, semi - i + 1));
    }
    i = semi;
  }
  return out;
}

// Concatenated text of every <t> element.
std::string text_runs(std::string_view xml) {
  std::string out;
  std::size_t p = 0;
  while ((p = xml.find("<t", p)) != std::string_view::npos) {
    const char after = p + 2 < xml.size() ? xml[p + 2] : '\0';
    if (after != '>' && after != ' ') {
      p += 2;
      continue;
    }
    const std::size_t open_end = xml.find('>', p);
    if (open_end == std::string_view::npos) break;
    if (xml[open_end - 1] == '/') {
      p = open_end + 1;
      continue;
    }
    const std::size_t close = xml.find("</t>", open_end);
    if (close == std::string_view::npos) break;
    out += decode_entities(xml.substr(open_end + 1, close - open_end - 1));
    p = close + 4;
  }
  return out;
}

std::string attribute(std::string_view tag, std::string_view name) {
  const std::string key = " " + std::string(name) + "=\"";
  const std::size_t p = tag.find(key);
  if (p == std::string_view::npos) return {};
  const std::size_t start = p + key.size();
  const std::size_t end = tag.find('"', start);
  return std::string(tag.substr(start, end - start));
}

// "BC12" -> zero-based column 54.
std::size_t column_index(std::string_view ref) {
  std::size_t col = 0;
  for (char c : ref) {
    if (c < 'A' || c > 'Z') break;
    col = col * 26 + static_cast<std::size_t>(c - 'A' + 1);
  }
  return col == 0 ? 0 : col - 1;
}

std::vector<std::string> shared_strings(std::string_view xml) {
  std::vector<std::string> out;
  std::size_t p = 0;
  while ((p = xml.find("<si", p)) != std::string_view::npos) {
    const std::size_t end = xml.find("</si>", p);
    if (end == std::string_view::npos) break;
    out.push_back(text_runs(xml.substr(p, end - p)));
    p = end + 5;
  }
  return out;
}

}  // namespace

std::vector<std::string> list_zip_members(std::string_view archive) {
  std::vector<std::string> names;
  for (auto& m : central_directory(archive)) names.push_back(std::move(m.name));
  return names;
}

std::string read_zip_member(std::string_view a, std::string_view name) {
  for (const auto& m : central_directory(a)) {
    if (m.name != name) continue;
    const std::size_t p = m.local_offset;
    if (le32(a, p) != 0x04034b50) bad("corrupt local header for " + m.name);
    const std::size_t data = p + 30 + le16(a, p + 26) + le16(a, p + 28);
    if (data + m.compressed > a.size()) bad("truncated member " + m.name);
    const std::string_view payload = a.substr(data, m.compressed);
    if (m.method == 0) return std::string(payload);
    if (m.method == 8) return inflate_raw(payload, m.uncompressed);
    bad("unsupported compression method " + std::to_string(m.method));
  }
  bad("member not found: " + std::string(name));
}

Table read_xlsx_first_sheet(std::string_view bytes) {
  if (bytes.substr(0, 4) != std::string_view("PK\x03\x04", 4)) bad("not a zip archive");
  const auto names = list_zip_members(bytes);

  std::vector<std::string> sheets;
  for (const auto& n : names) {
    if (n.rfind("xl/worksheets/sheet", 0) == 0 && n.size() > 4 && n.substr(n.size() - 4) == ".xml") sheets.push_back(n);
  }
  if (sheets.empty()) bad("no worksheets");
  // sheet1.xml before sheet10.xml
  std::sort(sheets.begin(), sheets.end(), [](const std::string& x, const std::string& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });

  std::vector<std::string> strings;
  if (std::find(names.begin(), names.end(), "xl/sharedStrings.xml") != names.end()) {
    strings = shared_strings(read_zip_member(bytes, "xl/sharedStrings.xml"));
  }

  const std::string xml = read_zip_member(bytes, sheets.front());
  Table table;
  std::size_t p = 0;
  while ((p = xml.find("<row", p)) != std::string::npos) {
    const std::size_t row_end = xml.find("</row>", p);
    const std::size_t tag_end = xml.find('>', p);
    if (tag_end == std::string::npos) break;
    std::vector<std::string> cells;
    if (xml[tag_end - 1] != '/' && row_end != std::string::npos) {
      const std::string_view row(xml.data() + tag_end + 1, row_end - tag_end - 1);
      std::size_t c = 0;
      while ((c = row.find("<c", c)) != std::string_view::npos) {
        const std::size_t ctag_end = row.find('>', c);
        if (ctag_end == std::string_view::npos) break;
        const std::string_view tag = row.substr(c, ctag_end - c + 1);
        const std::size_t col = column_index(attribute(tag, "r"));
        const std::string type = attribute(tag, "t");
        std::string text;
        std::size_t next = ctag_end + 1;
        if (row[ctag_end - 1] != '/') {
          const std::size_t cend = row.find("</c>", ctag_end);
          const std::string_view body = row.substr(ctag_end + 1, cend - ctag_end - 1);
          if (type == "inlineStr") {
            text = text_runs(body);
          } else {
            const std::size_t v = body.find("<v>");
            const std::size_t ve = body.find("</v>");
            if (v != std::string_view::npos && ve != std::string_view::npos) {
              text = decode_entities(body.substr(v + 3, ve - v - 3));
            }
            if (type == "s" && !text.empty()) {
              const std::size_t idx = std::stoul(text);
              if (idx >= strings.size()) bad("shared string index out of range");
              text = strings[idx];
            }
          }
          next = cend + 4;
        }
        if (cells.size() <= col) cells.resize(col + 1);
        cells[col] = std::move(text);
        c = next;
      }
    }
    table.push_back(std::move(cells));
    p = row_end == std::string::npos ? tag_end : row_end + 6;
  }
  return table;
}

}  // namespace tsnet::tools
