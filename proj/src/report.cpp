#include "lpinfer/report.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lpinfer/errors.hpp"

namespace lpinfer {

namespace {

std::vector<std::string> split_comma(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string strip(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_real(const std::string& cell, std::size_t line_no) {
    const std::string t = strip(cell);
    if (t.empty()) {
        throw ParseError("empty numeric field at line " + std::to_string(line_no));
    }
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v)) {
        throw ParseError("invalid numeric value '" + t + "' at line " +
                         std::to_string(line_no));
    }
    return v;
}

}  // namespace

CsvData read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open input file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw SchemaError("empty input file: " + path);
    auto header = split_comma(line);
    for (auto& h : header) h = strip(h);
    bool has_d = false;
    if (header.size() == 2 && header[0] == "x" && header[1] == "y") {
        has_d = false;
    } else if (header.size() == 3 && header[0] == "x" && header[1] == "y" &&
               header[2] == "d") {
        has_d = true;
    } else {
        throw SchemaError("header must be 'x,y' or 'x,y,d'");
    }

    CsvData data;
    if (has_d) data.d.emplace();
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (strip(line).empty()) continue;
        auto cells = split_comma(line);
        if (cells.size() != header.size()) {
            throw ParseError("wrong field count at line " +
                             std::to_string(line_no));
        }
        data.x.push_back(parse_real(cells[0], line_no));
        data.y.push_back(parse_real(cells[1], line_no));
        if (has_d) {
            const double dv = parse_real(cells[2], line_no);
            if (dv != 0.0 && dv != 1.0) {
                throw ParseError("treatment column must be 0 or 1 at line " +
                                 std::to_string(line_no));
            }
            data.d->push_back(static_cast<int>(dv));
        }
    }
    if (data.x.empty()) throw SchemaError("input has no data rows: " + path);
    return data;
}

Sample ingest_sample(const std::string& path) {
    CsvData data = read_csv(path);
    if (data.d) {
        throw SchemaError(
            "treatment column present; this input is for the rdd command");
    }
    return Sample{std::move(data.x), std::move(data.y)};
}

RddSample ingest_rdd_sample(const std::string& path, double cutoff) {
    CsvData data = read_csv(path);
    if (data.d) {
        for (std::size_t i = 0; i < data.x.size(); ++i) {
            const int expect = data.x[i] >= cutoff ? 1 : 0;
            if ((*data.d)[i] != expect) {
                throw DesignMismatch(
                    "d column disagrees with 1{x >= cutoff} at data row " +
                    std::to_string(i + 1) + " (only sharp designs supported)");
            }
        }
    }
    return RddSample{std::move(data.x), std::move(data.y), cutoff};
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace lpinfer
