#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "covplan/curve_fit.hpp"
#include "covplan/economics.hpp"
#include "covplan/geometry.hpp"
#include "covplan/metamodel.hpp"
#include "covplan/synthetic.hpp"

namespace covplan {

// --- minimal TOML reader -------------------------------------------------
// Covers the slice of TOML this tool's configs use: [section] and
// [section.sub] headers, bare keys, strings with \" and \\ escapes,
// booleans, integers, floats, single-line (possibly nested) arrays, and #
// comments. Dotted keys, multi-line arrays/strings, dates, and inline
// tables are not part of the dialect.

struct TomlValue;
using TomlArray = std::vector<TomlValue>;

struct TomlTable {
  std::map<std::string, TomlValue> entries;

  bool has(const std::string& key) const;
  const TomlValue* find(const std::string& key) const;
  const TomlTable* find_table(const std::string& key) const;

  // Typed lookups; `where` names the section for error messages. The _or
  // forms return the fallback when the key is absent.
  bool get_bool_or(const std::string& key, bool fallback, const std::string& where) const;
  std::int64_t get_int(const std::string& key, const std::string& where) const;
  std::int64_t get_int_or(const std::string& key, std::int64_t fallback,
                          const std::string& where) const;
  double get_double(const std::string& key, const std::string& where) const;
  double get_double_or(const std::string& key, double fallback, const std::string& where) const;
  std::string get_string(const std::string& key, const std::string& where) const;
  std::string get_string_or(const std::string& key, const std::string& fallback,
                            const std::string& where) const;
  std::vector<double> get_doubles(const std::string& key, const std::string& where) const;
  std::vector<std::int64_t> get_ints(const std::string& key, const std::string& where) const;
  std::vector<std::string> get_strings(const std::string& key, const std::string& where) const;
  std::vector<std::vector<double>> get_double_rows(const std::string& key,
                                                   const std::string& where) const;

  // Rejects keys outside `allowed`; catches config typos early.
  void expect_keys(std::initializer_list<const char*> allowed, const std::string& where) const;
};

struct TomlValue {
  std::variant<bool, std::int64_t, double, std::string, TomlArray, TomlTable> data;
};

TomlTable parse_toml(const std::string& text);
TomlTable load_toml_file(const std::string& path);

// --- run configuration ----------------------------------------------------

struct SpaceConfig {
  std::vector<std::string> names;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct KernelConfig {
  std::vector<double> semi_axes;
  double dilation = 1.5;
};

struct CloudConfig {
  std::uint64_t seed = 1;
  std::int64_t samples = 1 << 20;
};

struct BootstrapConfig {
  int replicates = 32;
  double cv_threshold = 0.05;
  bool require_monotone = true;
};

struct GeneratorConfig {
  std::string kind;  // "uniform", "mixture", "degradable", "replay"; empty = absent
  double leak = 0.5;
  GaussianMixture mixture;
};

struct MetamodelConfig {
  std::string name = "generation";
  std::vector<std::int64_t> grid{500, 1000, 2000, 5000};
  std::int64_t per_grid_sample = 50000;
};

struct PlanConfig {
  std::string mining_model;      // paths to meta-model JSON files
  std::string generation_model;
  bool mandate_audit = false;
  bool unscaled_improvement = false;
};

struct SweepConfig {
  std::string axis;
  std::vector<double> values;
};

struct SynthConfig {
  std::int64_t count = 1000;
};

// Everything a run needs, read once from a TOML file and then immutable.
// `--seed` replaces cloud.seed before any computation; the resolved dump
// reflects the effective values and is what the config hash covers.
struct RunConfig {
  SpaceConfig space;
  KernelConfig kernel;
  CloudConfig cloud;
  BootstrapConfig fit;
  QualityRequirements quality;
  CostAttributes mining_costs;
  CostAttributes generation_costs;
  MetamodelConfig metamodel;
  GeneratorConfig generator;
  PlanConfig plan;
  std::optional<SweepConfig> sweep;
  SynthConfig synth;
  std::string input;  // [io] input = "points.csv"

  bool has_space = false;
  bool has_kernel = false;

  static RunConfig load(const std::string& path);

  ParameterSpace parameter_space() const;  // requires [space]

  // Canonical dump of the effective configuration; byte-stable for equal
  // configs, written next to every command's outputs.
  std::string resolved_toml() const;
  std::uint64_t config_hash() const;  // FNV-1a 64 of resolved_toml()
};

std::string hash_hex(std::uint64_t hash);

}  // namespace covplan
