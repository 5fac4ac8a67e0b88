#pragma once

#include <charconv>
#include <fstream>
#include <string>
#include <vector>

#include "schatten/empirical.hpp"
#include "schatten/grid.hpp"

namespace schatten {

// Shortest round-trip decimal form of a double (deterministic bytes).
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

// Writes content to path atomically (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& content);

// GridMeasure round-trip as "center,weight" rows with a header line.
std::string grid_measure_csv(const GridMeasure& mu);
GridMeasure parse_grid_measure_csv(std::istream& is);  // parse errors carry line numbers

// EmpiricalMeasure as a one-column CSV of atoms.
std::string empirical_measure_csv(const EmpiricalMeasure& mu);
EmpiricalMeasure parse_empirical_measure_csv(std::istream& is);

}  // namespace schatten
