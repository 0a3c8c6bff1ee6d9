#pragma once

#include <string>
#include <vector>

#include "covplan/geometry.hpp"

namespace covplan {

struct PointsCsv {
  std::vector<std::string> dim_names;  // header row
  std::vector<ParameterPoint> points;
};

// Reads the standard parameter-set schema: one header row naming the
// dimensions, one comma-separated numeric row per scenario, UTF-8, decimal
// point. A leading BOM and lines starting with '#' are skipped. Malformed
// content raises ParseError with 1-based row/column; a file with a header
// but no data rows raises DataError.
PointsCsv read_points_csv(const std::string& path);

// Writes the same schema with LF line endings; numbers are shortest
// round-trip decimal. Optional comment lines are emitted before the header,
// each prefixed with "# ".
void write_points_csv(const std::string& path, const std::vector<std::string>& dim_names,
                      std::span<const ParameterPoint> points,
                      const std::vector<std::string>& comments = {});

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

// Generic small-table writer used for curves and sweeps; same conventions.
void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows,
                     const std::vector<std::string>& comments = {});

}  // namespace covplan
