#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "covplan/metamodel.hpp"

namespace covplan {

struct QualityRequirements {
  double allowed_error = 0.05;   // certified error bound, in [0, 1)
  double confidence_z = 1.96;    // z-score of the spot-check confidence level
  double target_coverage = 0.8;  // required coverage coefficient, in (0, 1)

  void validate() const;
};

struct CheckOptions {
  int coarse_intervals = 999;       // 1,000-point base grid over [0, e_max]
  int refine_factor = 10;           // refinement resolution per coarse cell
  bool mandate_audit = false;       // force n_rand >= 1 even at zero variance
  bool unscaled_improvement = false;  // compatibility: 0/1 improvement count
};

struct CheckPlan {
  double e_opt = 0.0;               // model error targeted after improvement
  std::int64_t n_improv = 0;        // scenarios checked for improvement
  std::int64_t n_rand = 0;          // Cochran sample (capped at n)
  std::int64_t n_rand_corr = 0;     // spot-check sample after overlap credit
  std::int64_t n_check = 0;         // n_improv + n_rand_corr
  double check_cost = 0.0;          // n_check * validation cost
  bool forced_full_sweep = false;   // allowed_error left no feasible e_opt
};

// max(ceil(n * (1 - e_opt / e_initial)), 0); 0 when e_initial is 0.
std::int64_t improvement_count(std::int64_t n, double e_initial, double e_opt);

// Compatibility form without the dataset factor; yields only 0 or 1.
std::int64_t improvement_count_unscaled(double e_initial, double e_opt);

// ceil(z^2 * e (1 - e) / e_tol^2); exact 0 at e in {0, 1}.
std::int64_t cochran_sample(double e_model, double e_tol, double z);

// max(ceil(n_rand - n_improv * n_rand / n), 0).
std::int64_t corrected_sample(std::int64_t n_rand, std::int64_t n_improv, std::int64_t n);

// Cheapest mix of improvement checks and spot checks over a dataset of n
// scenarios with expected error e_initial, such that the certified error
// (e_opt + tolerance) stays within req.allowed_error. Searched on the coarse
// grid over e_opt with bounded cell refinement; the result equals the
// minimum over the full refined grid.
CheckPlan optimize_check(std::int64_t n, double e_initial, const QualityRequirements& req,
                         double validation_cost = 1.0, const CheckOptions& options = {});

struct AcquisitionPlan {
  std::int64_t n_mine = 0;   // real-world scenarios mined (the entry point)
  std::int64_t n_gen = 0;    // valid generated scenarios
  CheckPlan check;
  double mining_cost = 0.0;
  double generation_cost = 0.0;  // includes replacing discarded invalid draws
  double checking_cost = 0.0;
  double setup_cost = 0.0;
  double total_cost = 0.0;
  bool feasible = false;
  double achieved_coverage = 0.0;  // relative to the mining reference saturation
};

struct PlanOptions {
  CheckOptions check{};
};

// Picks the cheapest feasible entry point of the generation model. The
// coverage target is target_coverage times the mining model's saturation
// volume; entries whose own saturation cannot exceed that target are
// infeasible. An infeasible result reports the best reachable coverage.
AcquisitionPlan optimize_acquisition(const AcquisitionMetaModel& mining,
                                     const AcquisitionMetaModel& generation,
                                     const QualityRequirements& req,
                                     const PlanOptions& options = {});

enum class SweepAxis { mining_cost, allowed_error, target_coverage, validation_cost };

struct SweepRow {
  double axis_value = 0.0;
  double total_cost = 0.0;
  std::int64_t n_mine = 0;
  std::int64_t n_gen = 0;
  std::int64_t n_check = 0;
  bool feasible = false;
};

SweepAxis sweep_axis_from_name(const std::string& name);
std::string sweep_axis_name(SweepAxis axis);

// Re-plans for each axis value; infeasible rows carry zero counts/cost and
// feasible = false, and the sweep continues.
std::vector<SweepRow> sensitivity_sweep(const AcquisitionMetaModel& mining,
                                        const AcquisitionMetaModel& generation,
                                        const QualityRequirements& req, SweepAxis axis,
                                        std::span<const double> values,
                                        const PlanOptions& options = {},
                                        unsigned threads = 1);

}  // namespace covplan
