#include "driftcal/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "driftcal/errors.hpp"

namespace driftcal {
namespace csv {

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr != end) {
        throw ParseError("not a number: '" + text + "'");
    }
    return value;
}

std::size_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw ParseError("missing column '" + name + "'");
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

Table read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);

    Table table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split(line);
        if (line_no == 1) {
            table.header = std::move(fields);
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(table.header.size()) + " fields, got " +
                             std::to_string(fields.size()));
        }
        table.rows.push_back(std::move(fields));
    }
    if (table.header.empty()) {
        throw ParseError(path + ": missing header row");
    }
    return table;
}

void write_file(const std::string& path, const Table& table) {
    std::ofstream out(path, std::ios::binary);  // binary keeps \n on every platform
    if (!out) throw ParseError("cannot write file: " + path);
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i > 0) out << ',';
        out << table.header[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out << ',';
            out << row[i];
        }
        out << '\n';
    }
    if (!out) throw ParseError("write failed: " + path);
}

}  // namespace csv
}  // namespace driftcal
