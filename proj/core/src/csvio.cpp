#include "affectbench/csvio.hpp"

#include <charconv>
#include <istream>
#include <sstream>

namespace afb {

static std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    cells.push_back(cur);
    return cells;
}

std::vector<CsvRow> read_csv(std::istream& in,
                             const std::vector<std::string>& expected_header) {
    std::vector<CsvRow> rows;
    std::string line;
    int lineno = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        auto cells = split_line(line);
        if (!saw_header) {
            saw_header = true;
            if (!expected_header.empty() && cells != expected_header) {
                throw Error("line 1: unexpected header '" + line + "'");
            }
            continue;
        }
        rows.push_back({lineno, std::move(cells)});
    }
    if (!saw_header && !expected_header.empty())
        throw Error("empty file: missing header");
    return rows;
}

double parse_number(const std::string& cell, int line) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw Error("line " + std::to_string(line) + ": not a number: '" + cell + "'");
    return value;
}

std::string join_csv(const std::vector<std::string>& cells) {
    std::ostringstream out;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << cells[i];
    }
    return out.str();
}

}  // namespace afb
