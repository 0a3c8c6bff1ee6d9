#include "covplan/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>

#include "covplan/errors.hpp"

namespace covplan {

namespace {

// Splits one CSV line; the schema is plain comma-separated numerics and
// names, so no quoting rules apply.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double parse_field(std::string_view field, int row, int col) {
  const std::string_view t = trim(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
    throw ParseError("expected a number, got \"" + std::string(field) + "\"", row, col);
  return value;
}

}  // namespace

PointsCsv read_points_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  std::string_view rest(text);
  if (rest.starts_with("\xEF\xBB\xBF")) rest.remove_prefix(3);

  PointsCsv out;
  int row = 0;
  bool header_seen = false;
  while (!rest.empty()) {
    const std::size_t eol = rest.find('\n');
    std::string_view line = rest.substr(0, eol);
    rest = eol == std::string_view::npos ? std::string_view{} : rest.substr(eol + 1);
    ++row;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    const auto fields = split_fields(line);
    if (!header_seen) {
      for (std::size_t c = 0; c < fields.size(); ++c) {
        const std::string_view name = trim(fields[c]);
        if (name.empty())
          throw ParseError("empty dimension name", row, static_cast<int>(c + 1));
        out.dim_names.emplace_back(name);
      }
      header_seen = true;
      continue;
    }

    if (fields.size() != out.dim_names.size())
      throw ParseError("expected " + std::to_string(out.dim_names.size()) + " fields, got " +
                           std::to_string(fields.size()),
                       row, 0);
    ParameterPoint p;
    p.coords.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c)
      p.coords.push_back(parse_field(fields[c], row, static_cast<int>(c + 1)));
    out.points.push_back(std::move(p));
  }

  if (!header_seen) throw ParseError("missing header row", 1, 0);
  if (out.points.empty()) throw DataError(path + " holds no data rows");
  return out;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw std::invalid_argument("format_double: value not representable");
  return std::string(buf, ptr);
}

namespace {

void write_lines(const std::string& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows,
                 const std::vector<std::string>& comments) {
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw DataError("cannot write " + path);
  for (const auto& comment : comments) outf << "# " << comment << '\n';
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c) outf << ',';
    outf << header[c];
  }
  outf << '\n';
  for (const auto& fields : rows) {
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (c) outf << ',';
      outf << fields[c];
    }
    outf << '\n';
  }
  outf.flush();
  if (!outf) throw DataError("write failed: " + path);
}

}  // namespace

void write_points_csv(const std::string& path, const std::vector<std::string>& dim_names,
                      std::span<const ParameterPoint> points,
                      const std::vector<std::string>& comments) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(points.size());
  for (const auto& p : points) {
    if (p.coords.size() != dim_names.size())
      throw std::invalid_argument("write_points_csv: point dims do not match header");
    std::vector<std::string> fields;
    fields.reserve(p.coords.size());
    for (double v : p.coords) fields.push_back(format_double(v));
    rows.push_back(std::move(fields));
  }
  write_lines(path, dim_names, rows, comments);
}

void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows,
                     const std::vector<std::string>& comments) {
  write_lines(path, header, rows, comments);
}

}  // namespace covplan
