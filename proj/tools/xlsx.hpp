#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace tsnet::tools {

using Table = std::vector<std::vector<std::string>>;

// Cell text of the first worksheet of an .xlsx workbook. Shared and inline
// strings are resolved; numbers keep their stored text. Missing cells are
// empty strings. Throws tsnet::error(unrecognized_format) for anything that
// is not a readable workbook.
Table read_xlsx_first_sheet(std::string_view bytes);

// Raw contents of one archive member, inflated.
std::string read_zip_member(std::string_view archive, std::string_view name);

// Names of all members in the archive's central directory.
std::vector<std::string> list_zip_members(std::string_view archive);

}  // namespace tsnet::tools
