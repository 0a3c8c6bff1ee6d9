#include "covplan/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

#include "covplan/errors.hpp"

namespace covplan {

namespace {

std::string_view skip_ws(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

bool is_bare_key_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_' || c == '-';
}

[[noreturn]] void fail(const std::string& msg, int line) { throw ParseError(msg, line, 0); }

std::string parse_string_value(std::string_view& s, int line) {
  s.remove_prefix(1);  // opening quote
  std::string out;
  while (!s.empty()) {
    char c = s.front();
    s.remove_prefix(1);
    if (c == '"') return out;
    if (c == '\\') {
      if (s.empty()) fail("unterminated escape in string", line);
      char e = s.front();
      s.remove_prefix(1);
      switch (e) {
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        default: fail(std::string("unsupported escape \\") + e, line);
      }
      continue;
    }
    out.push_back(c);
  }
  fail("unterminated string", line);
}

TomlValue parse_value(std::string_view& s, int line);

TomlValue parse_array(std::string_view& s, int line) {
  s.remove_prefix(1);  // '['
  TomlArray items;
  while (true) {
    s = skip_ws(s);
    if (s.empty()) fail("unterminated array", line);
    if (s.front() == ']') {
      s.remove_prefix(1);
      return TomlValue{std::move(items)};
    }
    items.push_back(parse_value(s, line));
    s = skip_ws(s);
    if (s.empty()) fail("unterminated array", line);
    if (s.front() == ',') {
      s.remove_prefix(1);
      continue;
    }
    if (s.front() != ']') fail("expected ',' or ']' in array", line);
  }
}

TomlValue parse_value(std::string_view& s, int line) {
  s = skip_ws(s);
  if (s.empty()) fail("missing value", line);
  if (s.front() == '"') return TomlValue{parse_string_value(s, line)};
  if (s.front() == '[') return parse_array(s, line);
  if (s.starts_with("true") && (s.size() == 4 || !is_bare_key_char(s[4]))) {
    s.remove_prefix(4);
    return TomlValue{true};
  }
  if (s.starts_with("false") && (s.size() == 5 || !is_bare_key_char(s[5]))) {
    s.remove_prefix(5);
    return TomlValue{false};
  }

  std::size_t len = 0;
  while (len < s.size() && s[len] != ',' && s[len] != ']' && s[len] != '#' &&
         s[len] != ' ' && s[len] != '\t')
    ++len;
  std::string_view token = s.substr(0, len);
  std::string_view digits = token;
  if (digits.starts_with('+')) digits.remove_prefix(1);

  std::int64_t int_value = 0;
  auto [iptr, iec] = std::from_chars(digits.data(), digits.data() + digits.size(), int_value);
  if (iec == std::errc{} && iptr == digits.data() + digits.size()) {
    s.remove_prefix(len);
    return TomlValue{int_value};
  }
  double dbl_value = 0.0;
  auto [dptr, dec] = std::from_chars(digits.data(), digits.data() + digits.size(), dbl_value);
  if (dec == std::errc{} && dptr == digits.data() + digits.size()) {
    s.remove_prefix(len);
    return TomlValue{dbl_value};
  }
  fail("cannot parse value \"" + std::string(token) + "\"", line);
}

std::vector<std::string> parse_table_path(std::string_view inner, int line) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = inner.find('.', start);
    std::string_view part =
        dot == std::string_view::npos ? inner.substr(start) : inner.substr(start, dot - start);
    part = skip_ws(part);
    while (!part.empty() && (part.back() == ' ' || part.back() == '\t')) part.remove_suffix(1);
    if (part.empty() || !std::all_of(part.begin(), part.end(), is_bare_key_char))
      fail("invalid table name", line);
    parts.emplace_back(part);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return parts;
}

}  // namespace

bool TomlTable::has(const std::string& key) const { return entries.count(key) != 0; }

const TomlValue* TomlTable::find(const std::string& key) const {
  const auto it = entries.find(key);
  return it == entries.end() ? nullptr : &it->second;
}

const TomlTable* TomlTable::find_table(const std::string& key) const {
  const TomlValue* v = find(key);
  return v ? std::get_if<TomlTable>(&v->data) : nullptr;
}

namespace {

[[noreturn]] void bad_type(const std::string& key, const std::string& where,
                           const char* expected) {
  throw DataError("config: " + where + "." + key + " must be " + expected);
}

const TomlValue& must_find(const TomlTable& t, const std::string& key,
                           const std::string& where) {
  const TomlValue* v = t.find(key);
  if (!v) throw DataError("config: missing required key " + where + "." + key);
  return *v;
}

double number_of(const TomlValue& v, const std::string& key, const std::string& where) {
  if (const auto* d = std::get_if<double>(&v.data)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&v.data)) return static_cast<double>(*i);
  bad_type(key, where, "a number");
}

}  // namespace

bool TomlTable::get_bool_or(const std::string& key, bool fallback,
                            const std::string& where) const {
  const TomlValue* v = find(key);
  if (!v) return fallback;
  if (const auto* b = std::get_if<bool>(&v->data)) return *b;
  bad_type(key, where, "a boolean");
}

std::int64_t TomlTable::get_int(const std::string& key, const std::string& where) const {
  const TomlValue& v = must_find(*this, key, where);
  if (const auto* i = std::get_if<std::int64_t>(&v.data)) return *i;
  bad_type(key, where, "an integer");
}

std::int64_t TomlTable::get_int_or(const std::string& key, std::int64_t fallback,
                                   const std::string& where) const {
  return find(key) ? get_int(key, where) : fallback;
}

double TomlTable::get_double(const std::string& key, const std::string& where) const {
  return number_of(must_find(*this, key, where), key, where);
}

double TomlTable::get_double_or(const std::string& key, double fallback,
                                const std::string& where) const {
  return find(key) ? get_double(key, where) : fallback;
}

std::string TomlTable::get_string(const std::string& key, const std::string& where) const {
  const TomlValue& v = must_find(*this, key, where);
  if (const auto* s = std::get_if<std::string>(&v.data)) return *s;
  bad_type(key, where, "a string");
}

std::string TomlTable::get_string_or(const std::string& key, const std::string& fallback,
                                     const std::string& where) const {
  return find(key) ? get_string(key, where) : fallback;
}

std::vector<double> TomlTable::get_doubles(const std::string& key,
                                           const std::string& where) const {
  const TomlValue& v = must_find(*this, key, where);
  const auto* arr = std::get_if<TomlArray>(&v.data);
  if (!arr) bad_type(key, where, "an array of numbers");
  std::vector<double> out;
  out.reserve(arr->size());
  for (const TomlValue& item : *arr) out.push_back(number_of(item, key, where));
  return out;
}

std::vector<std::int64_t> TomlTable::get_ints(const std::string& key,
                                              const std::string& where) const {
  const TomlValue& v = must_find(*this, key, where);
  const auto* arr = std::get_if<TomlArray>(&v.data);
  if (!arr) bad_type(key, where, "an array of integers");
  std::vector<std::int64_t> out;
  out.reserve(arr->size());
  for (const TomlValue& item : *arr) {
    const auto* i = std::get_if<std::int64_t>(&item.data);
    if (!i) bad_type(key, where, "an array of integers");
    out.push_back(*i);
  }
  return out;
}

std::vector<std::string> TomlTable::get_strings(const std::string& key,
                                                const std::string& where) const {
  const TomlValue& v = must_find(*this, key, where);
  const auto* arr = std::get_if<TomlArray>(&v.data);
  if (!arr) bad_type(key, where, "an array of strings");
  std::vector<std::string> out;
  out.reserve(arr->size());
  for (const TomlValue& item : *arr) {
    const auto* s = std::get_if<std::string>(&item.data);
    if (!s) bad_type(key, where, "an array of strings");
    out.push_back(*s);
  }
  return out;
}

std::vector<std::vector<double>> TomlTable::get_double_rows(const std::string& key,
                                                            const std::string& where) const {
  const TomlValue& v = must_find(*this, key, where);
  const auto* arr = std::get_if<TomlArray>(&v.data);
  if (!arr) bad_type(key, where, "an array of number arrays");
  std::vector<std::vector<double>> out;
  out.reserve(arr->size());
  for (const TomlValue& row : *arr) {
    const auto* inner = std::get_if<TomlArray>(&row.data);
    if (!inner) bad_type(key, where, "an array of number arrays");
    std::vector<double> values;
    values.reserve(inner->size());
    for (const TomlValue& item : *inner) values.push_back(number_of(item, key, where));
    out.push_back(std::move(values));
  }
  return out;
}

void TomlTable::expect_keys(std::initializer_list<const char*> allowed,
                            const std::string& where) const {
  for (const auto& [key, value] : entries) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw DataError("config: unknown key \"" + key + "\" in " + where);
  }
}

TomlTable parse_toml(const std::string& text) {
  TomlTable root;
  TomlTable* current = &root;
  std::string_view rest(text);
  if (rest.starts_with("\xEF\xBB\xBF")) rest.remove_prefix(3);
  int line_no = 0;

  while (!rest.empty()) {
    const std::size_t eol = rest.find('\n');
    std::string_view line = rest.substr(0, eol);
    rest = eol == std::string_view::npos ? std::string_view{} : rest.substr(eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    line = skip_ws(line);
    if (line.empty() || line.front() == '#') continue;

    if (line.front() == '[') {
      if (line.starts_with("[[")) fail("arrays of tables are not supported", line_no);
      const std::size_t close = line.find(']');
      if (close == std::string_view::npos) fail("missing ']' in table header", line_no);
      const auto parts = parse_table_path(line.substr(1, close - 1), line_no);
      std::string_view tail = skip_ws(line.substr(close + 1));
      if (!tail.empty() && tail.front() != '#') fail("trailing content after table header", line_no);
      current = &root;
      for (const std::string& part : parts) {
        auto it = current->entries.find(part);
        if (it == current->entries.end())
          it = current->entries.emplace(part, TomlValue{TomlTable{}}).first;
        else if (std::get_if<TomlTable>(&it->second.data) == nullptr)
          fail("\"" + part + "\" already used as a value", line_no);
        current = std::get_if<TomlTable>(&it->second.data);
      }
      continue;
    }

    std::size_t klen = 0;
    while (klen < line.size() && is_bare_key_char(line[klen])) ++klen;
    if (klen == 0) fail("expected a key", line_no);
    std::string key(line.substr(0, klen));
    std::string_view after = skip_ws(line.substr(klen));
    if (after.empty() || after.front() != '=') fail("expected '=' after key", line_no);
    after.remove_prefix(1);
    TomlValue value = parse_value(after, line_no);
    after = skip_ws(after);
    if (!after.empty() && after.front() != '#') fail("trailing content after value", line_no);
    if (!current->entries.emplace(key, std::move(value)).second)
      fail("duplicate key \"" + key + "\"", line_no);
  }
  return root;
}

TomlTable load_toml_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_toml(buffer.str());
}

// --- RunConfig -------------------------------------------------------------

namespace {

void check(bool ok, const std::string& msg) {
  if (!ok) throw DataError("config: " + msg);
}

}  // namespace

RunConfig RunConfig::load(const std::string& path) {
  RunConfig cfg;
  const TomlTable root = load_toml_file(path);
  root.expect_keys({"space", "kernel", "cloud", "fit", "quality", "costs", "metamodel",
                    "generator", "plan", "sweep", "synth", "io"},
                   "the top level");

  if (const TomlTable* t = root.find_table("space")) {
    t->expect_keys({"names", "lower", "upper"}, "[space]");
    cfg.space.lower = t->get_doubles("lower", "[space]");
    cfg.space.upper = t->get_doubles("upper", "[space]");
    check(!cfg.space.lower.empty(), "[space].lower must not be empty");
    check(cfg.space.lower.size() == cfg.space.upper.size(),
          "[space].lower and [space].upper must have equal length");
    if (t->has("names")) {
      cfg.space.names = t->get_strings("names", "[space]");
      check(cfg.space.names.size() == cfg.space.lower.size(),
            "[space].names must name every dimension");
    } else {
      for (std::size_t j = 0; j < cfg.space.lower.size(); ++j)
        cfg.space.names.push_back("x" + std::to_string(j + 1));
    }
    cfg.has_space = true;
    (void)cfg.parameter_space();  // bounds sanity
  }

  if (const TomlTable* t = root.find_table("kernel")) {
    t->expect_keys({"semi_axes", "dilation"}, "[kernel]");
    cfg.kernel.semi_axes = t->get_doubles("semi_axes", "[kernel]");
    cfg.kernel.dilation = t->get_double_or("dilation", cfg.kernel.dilation, "[kernel]");
    check(!cfg.kernel.semi_axes.empty(), "[kernel].semi_axes must not be empty");
    for (double p : cfg.kernel.semi_axes)
      check(std::isfinite(p) && p > 0.0, "[kernel].semi_axes must be positive");
    check(std::isfinite(cfg.kernel.dilation) && cfg.kernel.dilation >= 1.0,
          "[kernel].dilation must be at least 1");
    if (cfg.has_space)
      check(cfg.kernel.semi_axes.size() == cfg.space.lower.size(),
            "[kernel].semi_axes must match the space dimension");
    cfg.has_kernel = true;
  }

  if (const TomlTable* t = root.find_table("cloud")) {
    t->expect_keys({"seed", "samples"}, "[cloud]");
    const std::int64_t seed = t->get_int_or("seed", 1, "[cloud]");
    check(seed >= 0, "[cloud].seed must be non-negative");
    cfg.cloud.seed = static_cast<std::uint64_t>(seed);
    cfg.cloud.samples = t->get_int_or("samples", cfg.cloud.samples, "[cloud]");
    check(cfg.cloud.samples >= 1, "[cloud].samples must be positive");
  }

  if (const TomlTable* t = root.find_table("fit")) {
    t->expect_keys({"replicates", "cv_threshold", "require_monotone"}, "[fit]");
    cfg.fit.replicates =
        static_cast<int>(t->get_int_or("replicates", cfg.fit.replicates, "[fit]"));
    cfg.fit.cv_threshold = t->get_double_or("cv_threshold", cfg.fit.cv_threshold, "[fit]");
    cfg.fit.require_monotone = t->get_bool_or("require_monotone", true, "[fit]");
    check(cfg.fit.replicates >= 2, "[fit].replicates must be at least 2");
    check(std::isfinite(cfg.fit.cv_threshold) && cfg.fit.cv_threshold > 0.0,
          "[fit].cv_threshold must be positive");
  }

  if (const TomlTable* t = root.find_table("quality")) {
    t->expect_keys({"allowed_error", "confidence_z", "target_coverage"}, "[quality]");
    cfg.quality.allowed_error =
        t->get_double_or("allowed_error", cfg.quality.allowed_error, "[quality]");
    cfg.quality.confidence_z =
        t->get_double_or("confidence_z", cfg.quality.confidence_z, "[quality]");
    cfg.quality.target_coverage =
        t->get_double_or("target_coverage", cfg.quality.target_coverage, "[quality]");
  }
  cfg.quality.validate();

  if (const TomlTable* costs = root.find_table("costs")) {
    costs->expect_keys({"mining", "generation"}, "[costs]");
    const auto read_costs = [](const TomlTable& t, const std::string& where) {
      t.expect_keys({"setup", "gaining", "validation"}, where);
      CostAttributes c;
      c.setup = t.get_double_or("setup", 0.0, where);
      c.gaining = t.get_double_or("gaining", 0.0, where);
      c.validation = t.get_double_or("validation", 0.0, where);
      c.validate();
      return c;
    };
    if (const TomlTable* t = costs->find_table("mining"))
      cfg.mining_costs = read_costs(*t, "[costs.mining]");
    if (const TomlTable* t = costs->find_table("generation"))
      cfg.generation_costs = read_costs(*t, "[costs.generation]");
  }

  if (const TomlTable* t = root.find_table("metamodel")) {
    t->expect_keys({"name", "grid", "per_grid_sample"}, "[metamodel]");
    cfg.metamodel.name = t->get_string_or("name", cfg.metamodel.name, "[metamodel]");
    if (t->has("grid")) cfg.metamodel.grid = t->get_ints("grid", "[metamodel]");
    cfg.metamodel.per_grid_sample =
        t->get_int_or("per_grid_sample", cfg.metamodel.per_grid_sample, "[metamodel]");
    check(!cfg.metamodel.grid.empty(), "[metamodel].grid must not be empty");
    for (std::size_t i = 0; i < cfg.metamodel.grid.size(); ++i) {
      check(cfg.metamodel.grid[i] >= 1, "[metamodel].grid values must be positive");
      if (i) check(cfg.metamodel.grid[i] > cfg.metamodel.grid[i - 1],
                   "[metamodel].grid must be strictly increasing");
    }
    check(cfg.metamodel.per_grid_sample >= 1, "[metamodel].per_grid_sample must be positive");
  }

  if (const TomlTable* t = root.find_table("generator")) {
    t->expect_keys({"kind", "leak", "weights", "means", "sigmas"}, "[generator]");
    cfg.generator.kind = t->get_string("kind", "[generator]");
    check(cfg.generator.kind == "uniform" || cfg.generator.kind == "mixture" ||
              cfg.generator.kind == "degradable" || cfg.generator.kind == "replay",
          "[generator].kind must be uniform, mixture, degradable, or replay");
    cfg.generator.leak = t->get_double_or("leak", cfg.generator.leak, "[generator]");
    check(std::isfinite(cfg.generator.leak) && cfg.generator.leak >= 0.0 &&
              cfg.generator.leak <= 1.0,
          "[generator].leak must lie in [0, 1]");
    if (cfg.generator.kind == "mixture") {
      cfg.generator.mixture.weights = t->get_doubles("weights", "[generator]");
      cfg.generator.mixture.means = t->get_double_rows("means", "[generator]");
      cfg.generator.mixture.sigmas = t->get_double_rows("sigmas", "[generator]");
    }
  }

  if (const TomlTable* t = root.find_table("plan")) {
    t->expect_keys({"mining_model", "generation_model", "mandate_audit",
                    "unscaled_improvement"},
                   "[plan]");
    cfg.plan.mining_model = t->get_string_or("mining_model", "", "[plan]");
    cfg.plan.generation_model = t->get_string_or("generation_model", "", "[plan]");
    cfg.plan.mandate_audit = t->get_bool_or("mandate_audit", false, "[plan]");
    cfg.plan.unscaled_improvement = t->get_bool_or("unscaled_improvement", false, "[plan]");
  }

  if (const TomlTable* t = root.find_table("sweep")) {
    t->expect_keys({"axis", "values"}, "[sweep]");
    SweepConfig sweep;
    sweep.axis = t->get_string("axis", "[sweep]");
    sweep.values = t->get_doubles("values", "[sweep]");
    (void)sweep_axis_from_name(sweep.axis);
    check(!sweep.values.empty(), "[sweep].values must not be empty");
    cfg.sweep = std::move(sweep);
  }

  if (const TomlTable* t = root.find_table("synth")) {
    t->expect_keys({"count"}, "[synth]");
    cfg.synth.count = t->get_int_or("count", cfg.synth.count, "[synth]");
    check(cfg.synth.count >= 0, "[synth].count must be non-negative");
  }

  if (const TomlTable* t = root.find_table("io")) {
    t->expect_keys({"input"}, "[io]");
    cfg.input = t->get_string_or("input", "", "[io]");
  }

  return cfg;
}

ParameterSpace RunConfig::parameter_space() const {
  if (!has_space) throw DataError("config: [space] section is required for this command");
  return ParameterSpace(space.lower, space.upper);
}

namespace {

std::string toml_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string fmt(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  check(ec == std::errc{}, "unrepresentable number");
  return std::string(buf, ptr);
}

template <class T, class Fn>
std::string toml_array(const std::vector<T>& values, Fn&& item) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += item(values[i]);
  }
  out += "]";
  return out;
}

}  // namespace

std::string RunConfig::resolved_toml() const {
  std::ostringstream out;
  const auto dbl = [](double v) { return fmt(v); };
  const auto integer = [](std::int64_t v) { return std::to_string(v); };
  const auto str = [](const std::string& s) { return toml_string(s); };

  out << "[io]\ninput = " << toml_string(input) << "\n";
  if (has_space) {
    out << "\n[space]\nnames = " << toml_array(space.names, str)
        << "\nlower = " << toml_array(space.lower, dbl)
        << "\nupper = " << toml_array(space.upper, dbl) << "\n";
  }
  if (has_kernel) {
    out << "\n[kernel]\nsemi_axes = " << toml_array(kernel.semi_axes, dbl)
        << "\ndilation = " << fmt(kernel.dilation) << "\n";
  }
  out << "\n[cloud]\nseed = " << cloud.seed << "\nsamples = " << cloud.samples << "\n";
  out << "\n[fit]\nreplicates = " << fit.replicates
      << "\ncv_threshold = " << fmt(fit.cv_threshold)
      << "\nrequire_monotone = " << (fit.require_monotone ? "true" : "false") << "\n";
  out << "\n[quality]\nallowed_error = " << fmt(quality.allowed_error)
      << "\nconfidence_z = " << fmt(quality.confidence_z)
      << "\ntarget_coverage = " << fmt(quality.target_coverage) << "\n";
  out << "\n[costs.mining]\nsetup = " << fmt(mining_costs.setup)
      << "\ngaining = " << fmt(mining_costs.gaining)
      << "\nvalidation = " << fmt(mining_costs.validation) << "\n";
  out << "\n[costs.generation]\nsetup = " << fmt(generation_costs.setup)
      << "\ngaining = " << fmt(generation_costs.gaining)
      << "\nvalidation = " << fmt(generation_costs.validation) << "\n";
  out << "\n[metamodel]\nname = " << toml_string(metamodel.name)
      << "\ngrid = " << toml_array(metamodel.grid, integer)
      << "\nper_grid_sample = " << metamodel.per_grid_sample << "\n";
  if (!generator.kind.empty()) {
    out << "\n[generator]\nkind = " << toml_string(generator.kind)
        << "\nleak = " << fmt(generator.leak) << "\n";
    if (generator.kind == "mixture") {
      const auto row = [&](const std::vector<double>& r) { return toml_array(r, dbl); };
      out << "weights = " << toml_array(generator.mixture.weights, dbl)
          << "\nmeans = " << toml_array(generator.mixture.means, row)
          << "\nsigmas = " << toml_array(generator.mixture.sigmas, row) << "\n";
    }
  }
  out << "\n[plan]\nmining_model = " << toml_string(plan.mining_model)
      << "\ngeneration_model = " << toml_string(plan.generation_model)
      << "\nmandate_audit = " << (plan.mandate_audit ? "true" : "false")
      << "\nunscaled_improvement = " << (plan.unscaled_improvement ? "true" : "false") << "\n";
  if (sweep) {
    out << "\n[sweep]\naxis = " << toml_string(sweep->axis)
        << "\nvalues = " << toml_array(sweep->values, dbl) << "\n";
  }
  out << "\n[synth]\ncount = " << synth.count << "\n";
  return out.str();
}

std::uint64_t RunConfig::config_hash() const {
  const std::string text = resolved_toml();
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string hash_hex(std::uint64_t hash) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[hash & 0xF];
    hash >>= 4;
  }
  return out;
}

}  // namespace covplan
