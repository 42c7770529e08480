#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace symconj {

// 17 significant digits; round-trips every double.
std::string format_number(double v);

// Joins cells with ',' and terminates the row with '\n'.
void write_csv_row(std::ostream& out, const std::vector<std::string>& cells);

}  // namespace symconj
