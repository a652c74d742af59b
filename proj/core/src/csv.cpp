#include "casecost/csv.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace casecost::csv {

namespace {

[[noreturn]] void fail(std::string_view source, std::size_t record, std::string_view what) {
    throw std::runtime_error(fmt::format("{}: row {}: {}", source, record, what));
}

}  // namespace

Table parse(std::string_view text, std::string_view source_name) {
    // Skip a UTF-8 BOM if present.
    if (text.substr(0, 3) == "\xEF\xBB\xBF") {
        text.remove_prefix(3);
    }

    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    std::size_t record_no = 1;

    auto end_field = [&] {
        fields.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(fields));
        fields.clear();
        ++record_no;
    };

    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < n && text[i + 1] == '"') {
                    field.push_back('"');
                    i += 2;
                    continue;
                }
                in_quotes = false;
                ++i;
                if (i < n && text[i] != ',' && text[i] != '\r' && text[i] != '\n') {
                    fail(source_name, record_no, "closing quote must be followed by a delimiter");
                }
                continue;
            }
            field.push_back(c);
            ++i;
            continue;
        }
        switch (c) {
        case '"':
            if (!field.empty() || field_was_quoted) {
                fail(source_name, record_no, "quote inside unquoted field");
            }
            in_quotes = true;
            field_was_quoted = true;
            ++i;
            break;
        case ',':
            end_field();
            ++i;
            break;
        case '\r':
            if (i + 1 < n && text[i + 1] == '\n') {
                ++i;
            }
            [[fallthrough]];
        case '\n':
            end_record();
            ++i;
            break;
        default:
            field.push_back(c);
            ++i;
            break;
        }
    }
    if (in_quotes) {
        fail(source_name, record_no, "unterminated quoted field");
    }
    // Final record without a trailing newline.
    if (!field.empty() || !fields.empty() || field_was_quoted) {
        end_record();
    }

    if (records.empty()) {
        throw std::runtime_error(fmt::format("{}: empty document, expected a header row", source_name));
    }
    Table table;
    table.header = std::move(records.front());
    table.rows.assign(std::make_move_iterator(records.begin() + 1), std::make_move_iterator(records.end()));
    return table;
}

Table read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error(fmt::format("cannot open {}", path.string()));
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.filename().string());
}

std::string escape(std::string_view field) {
    const bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) {
        return std::string{field};
    }
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        out << escape(fields[i]);
    }
    out << '\n';
}

void write(std::ostream& out, const Table& table) {
    write_row(out, table.header);
    for (const auto& row : table.rows) {
        write_row(out, row);
    }
}

void write_file(const std::filesystem::path& path, const Table& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot write {}", path.string()));
    }
    write(out, table);
    if (!out.flush()) {
        throw std::runtime_error(fmt::format("write failed for {}", path.string()));
    }
}

std::optional<double> parse_double(std::string_view field) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        return std::nullopt;
    }
    return value;
}

std::optional<std::int64_t> parse_int(std::string_view field) {
    std::int64_t value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        return std::nullopt;
    }
    return value;
}

}  // namespace casecost::csv
