#ifndef DRIFTCAL_CSV_HPP
#define DRIFTCAL_CSV_HPP

#include <string>
#include <vector>

namespace driftcal {
namespace csv {

/// Shortest representation that parses back to the same double; never more
/// than 17 significant digits. Locale-independent.
std::string format_double(double value);

/// Locale-independent strtod via std::from_chars.
double parse_double(const std::string& text);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a named column; throws ParseError when absent.
    std::size_t column(const std::string& name) const;
};

/// Strict dialect: comma separator, '.' decimal, mandatory header, UTF-8,
/// no quoting. Throws ParseError with a line number on malformed rows.
Table read_file(const std::string& path);

void write_file(const std::string& path, const Table& table);

}  // namespace csv
}  // namespace driftcal

#endif  // DRIFTCAL_CSV_HPP
