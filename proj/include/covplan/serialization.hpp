#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "covplan/curve_fit.hpp"
#include "covplan/economics.hpp"
#include "covplan/errors.hpp"
#include "covplan/metamodel.hpp"

namespace covplan {

// Stamped into every JSON artifact so results can be traced back to the
// exact configuration and seed that produced them.
struct Provenance {
  std::string config_hash;  // 16 hex digits
  std::uint64_t seed = 0;
  int dims = 0;
};

inline nlohmann::json to_json_value(const Provenance& p) {
  return {{"config_hash", p.config_hash}, {"seed", p.seed}, {"dims", p.dims}};
}

inline Provenance provenance_from_json(const nlohmann::json& j) {
  Provenance p;
  p.config_hash = j.at("config_hash").get<std::string>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.dims = j.at("dims").get<int>();
  return p;
}

inline nlohmann::json to_json_value(const WeibullCoverageModel& m) {
  return {{"a", m.a}, {"b", m.b}, {"c", m.c}, {"v_pre", m.v_pre}};
}

inline WeibullCoverageModel model_from_json(const nlohmann::json& j) {
  WeibullCoverageModel m;
  m.a = j.at("a").get<double>();
  m.b = j.at("b").get<double>();
  m.c = j.at("c").get<double>();
  m.v_pre = j.at("v_pre").get<double>();
  return m;
}

inline nlohmann::json to_json_value(const FitDiagnostics& d) {
  return {{"replicates", d.replicates},
          {"failed", d.failed},
          {"param_mean", d.param_mean},
          {"param_cv", d.param_cv},
          {"rss", d.rss},
          {"converged", d.converged},
          {"cv_threshold", d.cv_threshold}};
}

inline nlohmann::json to_json_value(const CostAttributes& c) {
  return {{"setup", c.setup}, {"gaining", c.gaining}, {"validation", c.validation}};
}

inline CostAttributes costs_from_json(const nlohmann::json& j) {
  CostAttributes c;
  c.setup = j.at("setup").get<double>();
  c.gaining = j.at("gaining").get<double>();
  c.validation = j.at("validation").get<double>();
  return c;
}

inline nlohmann::json metamodel_to_json(const AcquisitionMetaModel& model,
                                        const Provenance& provenance) {
  nlohmann::json coverage = nlohmann::json::array();
  for (const auto& [entry, weibull] : model.coverage_models)
    coverage.push_back(nlohmann::json::array({entry, to_json_value(weibull)}));
  nlohmann::json errors = nlohmann::json::array();
  for (const auto& [entry, rate] : model.error_rate.samples())
    errors.push_back(nlohmann::json::array({entry, rate}));
  return {{"name", model.name},
          {"kind", model.kind == AcquisitionKind::mining ? "mining" : "generation"},
          {"costs", to_json_value(model.costs)},
          {"error_samples", errors},
          {"coverage_models", coverage},
          {"provenance", to_json_value(provenance)}};
}

struct StoredMetaModel {
  AcquisitionMetaModel model;
  Provenance provenance;
};

inline StoredMetaModel metamodel_from_json(const nlohmann::json& j) {
  StoredMetaModel out;
  out.model.name = j.at("name").get<std::string>();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "mining")
    out.model.kind = AcquisitionKind::mining;
  else if (kind == "generation")
    out.model.kind = AcquisitionKind::generation;
  else
    throw DataError("meta model kind must be \"mining\" or \"generation\", got \"" + kind +
                    "\"");
  out.model.costs = costs_from_json(j.at("costs"));
  std::vector<std::pair<std::int64_t, double>> errors;
  for (const auto& item : j.at("error_samples"))
    errors.emplace_back(item.at(0).get<std::int64_t>(), item.at(1).get<double>());
  out.model.error_rate = ErrorRateFunction(std::move(errors));
  for (const auto& item : j.at("coverage_models"))
    out.model.coverage_models.emplace_back(item.at(0).get<std::int64_t>(),
                                           model_from_json(item.at(1)));
  if (j.contains("provenance")) out.provenance = provenance_from_json(j.at("provenance"));
  out.model.validate();
  return out;
}

inline nlohmann::json to_json_value(const CheckPlan& c) {
  return {{"e_opt", c.e_opt},
          {"n_improv", c.n_improv},
          {"n_rand", c.n_rand},
          {"n_rand_corr", c.n_rand_corr},
          {"n_check", c.n_check},
          {"check_cost", c.check_cost},
          {"forced_full_sweep", c.forced_full_sweep}};
}

inline nlohmann::json to_json_value(const AcquisitionPlan& p) {
  return {{"n_mine", p.n_mine},
          {"n_gen", p.n_gen},
          {"check", to_json_value(p.check)},
          {"mining_cost", p.mining_cost},
          {"generation_cost", p.generation_cost},
          {"checking_cost", p.checking_cost},
          {"setup_cost", p.setup_cost},
          {"total_cost", p.total_cost},
          {"feasible", p.feasible},
          {"achieved_coverage", p.achieved_coverage}};
}

inline nlohmann::json to_json_value(const QualityRequirements& q) {
  return {{"allowed_error", q.allowed_error},
          {"confidence_z", q.confidence_z},
          {"target_coverage", q.target_coverage}};
}

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed JSON in " + path + ": " + e.what());
  }
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << j.dump(2) << '\n';
  out.flush();
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace covplan
