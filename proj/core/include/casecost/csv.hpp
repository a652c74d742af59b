#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace casecost::csv {

/// A parsed CSV document: mandatory header row plus data rows. Rows keep the
/// raw field strings; typed parsing is the caller's job.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// RFC 4180 parse of a whole document. Quoted fields may contain commas,
/// quotes (doubled) and line breaks; records end at CRLF or LF.
/// Throws std::runtime_error on malformed quoting or an empty document,
/// citing the record number ("row N", header = row 1).
Table parse(std::string_view text, std::string_view source_name = "csv");

Table read_file(const std::filesystem::path& path);

std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

void write(std::ostream& out, const Table& table);

void write_file(const std::filesystem::path& path, const Table& table);

/// Strict full-token numeric parses; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view field);
std::optional<std::int64_t> parse_int(std::string_view field);

}  // namespace casecost::csv
