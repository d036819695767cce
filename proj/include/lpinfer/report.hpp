#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lpinfer/locpoly.hpp"
#include "lpinfer/rdd.hpp"

namespace lpinfer {

/// Raw columns of an input file: header `x,y` or `x,y,d`.
struct CsvData {
    std::vector<double> x;
    std::vector<double> y;
    std::optional<std::vector<int>> d;
};

/// Strict reader: finite decimal reals, d (when present) 0/1 only.
/// ParseError carries the 1-based line number; unknown or missing columns
/// raise SchemaError.
CsvData read_csv(const std::string& path);

/// Plain regression sample; rejects files carrying a treatment column.
Sample ingest_sample(const std::string& path);

/// Sharp-design sample. A d column, if present, must equal 1{x >= cutoff}
/// row for row (DesignMismatch otherwise).
RddSample ingest_rdd_sample(const std::string& path, double cutoff);

/// Shortest round-trip decimal text for a double (exact re-read).
std::string format_double(double v);

}  // namespace lpinfer
