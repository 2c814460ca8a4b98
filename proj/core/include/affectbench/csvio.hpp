#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "affectbench/types.hpp"

namespace afb {

struct CsvRow {
    int line = 0;  // 1-based line number in the source stream
    std::vector<std::string> cells;
};

/// Split a comma-separated stream into rows. No quoting; cells may be empty.
/// Verifies the header matches `expected_header` exactly when nonempty.
std::vector<CsvRow> read_csv(std::istream& in,
                             const std::vector<std::string>& expected_header);

double parse_number(const std::string& cell, int line);

std::string join_csv(const std::vector<std::string>& cells);

}  // namespace afb
