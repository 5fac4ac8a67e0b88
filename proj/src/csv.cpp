#include "schatten/csv.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <stdexcept>

namespace schatten {

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open for writing: " + tmp);
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!os) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::string grid_measure_csv(const GridMeasure& mu) {
    std::string out = "center,weight\n";
    for (int i = 0; i < mu.cells(); ++i) {
        out += format_double(mu.center(i));
        out += ',';
        out += format_double(mu.weights[i]);
        out += '\n';
    }
    return out;
}

namespace {

double parse_field(const std::string& s, int line_no) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
        throw std::invalid_argument("measure csv: bad number at line " +
                                    std::to_string(line_no) + ": '" + s + "'");
    return v;
}

}  // namespace

std::string empirical_measure_csv(const EmpiricalMeasure& mu) {
    std::string out = "atom\n";
    for (double a : mu.atoms()) {
        out += format_double(a);
        out += '\n';
    }
    return out;
}

EmpiricalMeasure parse_empirical_measure_csv(std::istream& is) {
    std::string line;
    int line_no = 0;
    std::vector<double> atoms;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1) {
            if (line != "atom")
                throw std::invalid_argument("atoms csv: expected header 'atom' at line 1");
            continue;
        }
        if (line.empty()) continue;
        atoms.push_back(parse_field(line, line_no));
    }
    return EmpiricalMeasure(std::move(atoms));
}

GridMeasure parse_grid_measure_csv(std::istream& is) {
    std::string line;
    int line_no = 0;
    std::vector<double> centers, weights;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1) {
            if (line != "center,weight")
                throw std::invalid_argument("measure csv: expected header 'center,weight' at line 1");
            continue;
        }
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("measure csv: missing comma at line " +
                                        std::to_string(line_no));
        centers.push_back(parse_field(line.substr(0, comma), line_no));
        weights.push_back(parse_field(line.substr(comma + 1), line_no));
    }
    if (centers.size() < 1) throw std::invalid_argument("measure csv: no data rows");

    GridMeasure mu;
    if (centers.size() == 1) {
        mu.width = 1.0;  // width is unrecoverable from a single center; assume unit
    } else {
        mu.width = centers[1] - centers[0];
        if (!(mu.width > 0.0)) throw std::invalid_argument("measure csv: centers must increase");
        for (std::size_t i = 1; i < centers.size(); ++i) {
            const double step = centers[i] - centers[i - 1];
            if (std::fabs(step - mu.width) > 1e-9 * std::max(1.0, std::fabs(mu.width)))
                throw std::invalid_argument("measure csv: non-uniform spacing at line " +
                                            std::to_string(i + 2));
        }
    }
    mu.left = centers.front() - 0.5 * mu.width;
    mu.weights = std::move(weights);
    mu.validate();
    return mu;
}

}  // namespace schatten
