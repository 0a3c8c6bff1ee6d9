#include "covplan/economics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "covplan/curve_fit.hpp"
#include "covplan/parallel.hpp"

namespace covplan {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

void QualityRequirements::validate() const {
  require(std::isfinite(allowed_error) && allowed_error >= 0.0 && allowed_error < 1.0,
          "QualityRequirements: allowed_error must lie in [0, 1)");
  require(std::isfinite(confidence_z) && confidence_z > 0.0,
          "QualityRequirements: confidence_z must be positive");
  require(std::isfinite(target_coverage) && target_coverage > 0.0 && target_coverage < 1.0,
          "QualityRequirements: target_coverage must lie in (0, 1)");
}

std::int64_t improvement_count(std::int64_t n, double e_initial, double e_opt) {
  require(n >= 0, "improvement_count: n must be non-negative");
  require(std::isfinite(e_initial) && e_initial >= 0.0 && e_initial <= 1.0,
          "improvement_count: e_initial must lie in [0, 1]");
  require(std::isfinite(e_opt) && e_opt >= 0.0, "improvement_count: e_opt must be non-negative");
  require(e_opt <= e_initial, "improvement_count: e_opt must not exceed e_initial");
  if (e_initial == 0.0 || n == 0) return 0;
  const double raw = static_cast<double>(n) * (1.0 - e_opt / e_initial);
  const auto count = static_cast<std::int64_t>(std::ceil(raw));
  return std::clamp<std::int64_t>(count, 0, n);
}

std::int64_t improvement_count_unscaled(double e_initial, double e_opt) {
  require(std::isfinite(e_initial) && e_initial >= 0.0 && e_initial <= 1.0,
          "improvement_count: e_initial must lie in [0, 1]");
  require(std::isfinite(e_opt) && e_opt >= 0.0, "improvement_count: e_opt must be non-negative");
  require(e_opt <= e_initial, "improvement_count: e_opt must not exceed e_initial");
  if (e_initial == 0.0) return 0;
  const auto count = static_cast<std::int64_t>(std::ceil(1.0 - e_opt / e_initial));
  return std::max<std::int64_t>(count, 0);
}

std::int64_t cochran_sample(double e_model, double e_tol, double z) {
  require(std::isfinite(e_model) && e_model >= 0.0 && e_model <= 1.0,
          "cochran_sample: e_model must lie in [0, 1]");
  require(std::isfinite(e_tol) && e_tol > 0.0, "cochran_sample: e_tol must be positive");
  require(std::isfinite(z) && z > 0.0, "cochran_sample: z must be positive");
  const double raw = z * z * e_model * (1.0 - e_model) / (e_tol * e_tol);
  return static_cast<std::int64_t>(std::ceil(raw));
}

std::int64_t corrected_sample(std::int64_t n_rand, std::int64_t n_improv, std::int64_t n) {
  require(n >= 1, "corrected_sample: n must be at least 1");
  require(n_rand >= 0, "corrected_sample: n_rand must be non-negative");
  require(n_improv >= 0 && n_improv <= n, "corrected_sample: n_improv must lie in [0, n]");
  const double raw = static_cast<double>(n_rand) -
                     static_cast<double>(n_improv) * static_cast<double>(n_rand) /
                         static_cast<double>(n);
  const auto count = static_cast<std::int64_t>(std::ceil(raw));
  return std::max<std::int64_t>(count, 0);
}

namespace {

struct CheckCounts {
  std::int64_t n_improv = 0;
  std::int64_t n_rand = 0;
  std::int64_t n_rand_corr = 0;
  std::int64_t n_check = 0;
};

struct CheckContext {
  std::int64_t n = 0;
  double e_initial = 0.0;
  double allowed_error = 0.0;
  double z = 0.0;
  bool mandate_audit = false;
  bool unscaled = false;

  std::int64_t improv(double e_opt) const {
    std::int64_t count = unscaled ? improvement_count_unscaled(e_initial, e_opt)
                                  : improvement_count(n, e_initial, e_opt);
    return std::min(count, n);
  }

  std::int64_t rand_sample(double e_opt) const {
    std::int64_t count = cochran_sample(e_opt, allowed_error - e_opt, z);
    if (mandate_audit && count == 0) count = 1;
    return std::min(count, n);
  }

  CheckCounts evaluate(double e_opt) const {
    CheckCounts c;
    c.n_improv = improv(e_opt);
    c.n_rand = rand_sample(e_opt);
    c.n_rand_corr = corrected_sample(c.n_rand, c.n_improv, n);
    c.n_check = c.n_improv + c.n_rand_corr;
    return c;
  }
};

CheckPlan finish_plan(double e_opt, const CheckCounts& counts, double validation_cost,
                      bool forced) {
  CheckPlan plan;
  plan.e_opt = e_opt;
  plan.n_improv = counts.n_improv;
  plan.n_rand = counts.n_rand;
  plan.n_rand_corr = counts.n_rand_corr;
  plan.n_check = counts.n_check;
  plan.check_cost = static_cast<double>(counts.n_check) * validation_cost;
  plan.forced_full_sweep = forced;
  return plan;
}

}  // namespace

CheckPlan optimize_check(std::int64_t n, double e_initial, const QualityRequirements& req,
                         double validation_cost, const CheckOptions& options) {
  req.validate();
  require(n >= 0, "optimize_check: n must be non-negative");
  require(std::isfinite(e_initial) && e_initial >= 0.0 && e_initial < 1.0,
          "optimize_check: e_initial must lie in [0, 1)");
  require(std::isfinite(validation_cost) && validation_cost >= 0.0,
          "optimize_check: validation_cost must be non-negative");
  require(options.coarse_intervals >= 1, "optimize_check: coarse_intervals must be positive");
  require(options.refine_factor >= 1, "optimize_check: refine_factor must be positive");

  if (n == 0) return finish_plan(0.0, CheckCounts{}, validation_cost, false);

  CheckContext ctx;
  ctx.n = n;
  ctx.e_initial = e_initial;
  ctx.allowed_error = req.allowed_error;
  ctx.z = req.confidence_z;
  ctx.mandate_audit = options.mandate_audit;
  ctx.unscaled = options.unscaled_improvement;

  if (e_initial == 0.0) {
    CheckCounts c;
    if (options.mandate_audit) c.n_rand = std::min<std::int64_t>(1, n);
    c.n_rand_corr = c.n_rand;
    c.n_check = c.n_rand_corr;
    return finish_plan(0.0, c, validation_cost, false);
  }

  if (req.allowed_error == 0.0) {
    // The spot-check sample diverges as the tolerance vanishes; the only
    // certifiable plan checks everything.
    CheckCounts c;
    c.n_improv = ctx.improv(0.0);
    c.n_check = c.n_improv;
    return finish_plan(0.0, c, validation_cost, true);
  }

  const double e_max = std::min(e_initial, req.allowed_error * (1.0 - 1e-6));
  const std::int64_t refined_intervals =
      static_cast<std::int64_t>(options.coarse_intervals) * options.refine_factor;
  const auto point = [&](std::int64_t j) {
    return e_max * (static_cast<double>(j) / static_cast<double>(refined_intervals));
  };

  // The objective is piecewise constant, so a coarse scan plus bound-pruned
  // refinement reproduces the full refined-grid minimum exactly, first
  // (smallest e_opt) attainer included.
  std::int64_t coarse_min = std::numeric_limits<std::int64_t>::max();
  for (int i = 0; i <= options.coarse_intervals; ++i) {
    const std::int64_t j = static_cast<std::int64_t>(i) * options.refine_factor;
    coarse_min = std::min(coarse_min, ctx.evaluate(point(j)).n_check);
  }

  std::int64_t best_value = std::numeric_limits<std::int64_t>::max();
  std::int64_t best_j = 0;
  for (int i = 0; i < options.coarse_intervals; ++i) {
    const std::int64_t j_lo = static_cast<std::int64_t>(i) * options.refine_factor;
    const std::int64_t j_hi = j_lo + options.refine_factor;
    const double e_lo = point(j_lo);
    const double e_hi = point(j_hi);
    // n_improv falls and the corrected random sample grows across the cell, so
    // combining the right edge of one with the left edge of the other bounds
    // every interior value from below.
    const std::int64_t lower_bound =
        ctx.improv(e_hi) + corrected_sample(ctx.rand_sample(e_lo), ctx.improv(e_lo), n);
    if (lower_bound > coarse_min) continue;
    for (std::int64_t j = j_lo; j <= j_hi; ++j) {
      const std::int64_t value = ctx.evaluate(point(j)).n_check;
      if (value < best_value) {
        best_value = value;
        best_j = j;
      }
    }
  }

  const double e_opt = point(best_j);
  return finish_plan(e_opt, ctx.evaluate(e_opt), validation_cost, false);
}

namespace {

std::optional<AcquisitionPlan> plan_for_entry(const AcquisitionMetaModel& mining,
                                              const AcquisitionMetaModel& generation,
                                              std::int64_t entry,
                                              const WeibullCoverageModel& model,
                                              double coverage_target, double mining_saturation,
                                              const QualityRequirements& req,
                                              const PlanOptions& options) {
  AcquisitionPlan plan;
  plan.n_mine = entry;
  plan.n_gen = required_count(model, coverage_target);
  const double e_initial =
      plan.n_gen > 0 ? evaluate_error_rate(generation, static_cast<double>(entry)) : 0.0;
  if (e_initial >= 1.0) return std::nullopt;  // nothing this entry generates is ever valid
  plan.check =
      optimize_check(plan.n_gen, e_initial, req, generation.costs.validation, options.check);
  plan.mining_cost = static_cast<double>(plan.n_mine) * mining.costs.gaining;
  const double replacement = static_cast<double>(plan.check.n_improv) * e_initial *
                             generation.costs.gaining;
  plan.generation_cost =
      static_cast<double>(plan.n_gen) * generation.costs.gaining + replacement;
  plan.checking_cost = plan.check.check_cost;
  plan.setup_cost = (plan.n_mine > 0 ? mining.costs.setup : 0.0) +
                    (plan.n_gen > 0 ? generation.costs.setup : 0.0);
  plan.total_cost =
      plan.setup_cost + plan.mining_cost + plan.generation_cost + plan.checking_cost;
  plan.feasible = true;
  plan.achieved_coverage =
      model.value(static_cast<double>(plan.n_gen)) / mining_saturation;
  return plan;
}

}  // namespace

AcquisitionPlan optimize_acquisition(const AcquisitionMetaModel& mining,
                                     const AcquisitionMetaModel& generation,
                                     const QualityRequirements& req,
                                     const PlanOptions& options) {
  req.validate();
  mining.validate();
  generation.validate();
  require(mining.kind == AcquisitionKind::mining,
          "optimize_acquisition: first model must be a mining model");
  require(generation.kind == AcquisitionKind::generation,
          "optimize_acquisition: second model must be a generation model");

  const WeibullCoverageModel& mining_model = mining.coverage_models.front().second;
  const double mining_saturation = mining_model.saturation();
  require(std::isfinite(mining_saturation) && mining_saturation > 0.0,
          "optimize_acquisition: mining model saturation must be positive");
  const double target_volume = req.target_coverage * mining_saturation;

  AcquisitionPlan best;
  double best_ratio = 0.0;
  for (const auto& [entry, model] : generation.coverage_models) {
    best_ratio = std::max(best_ratio, model.saturation() / mining_saturation);
    const double coverage_target = target_volume / model.saturation();
    if (!(coverage_target < 1.0)) continue;  // saturation cannot reach the target
    const std::optional<AcquisitionPlan> candidate = plan_for_entry(
        mining, generation, entry, model, coverage_target, mining_saturation, req, options);
    if (!candidate) continue;
    if (!best.feasible || candidate->total_cost < best.total_cost) best = *candidate;
  }
  if (!best.feasible) best.achieved_coverage = best_ratio;
  return best;
}

SweepAxis sweep_axis_from_name(const std::string& name) {
  if (name == "mining_cost") return SweepAxis::mining_cost;
  if (name == "allowed_error") return SweepAxis::allowed_error;
  if (name == "target_coverage") return SweepAxis::target_coverage;
  if (name == "validation_cost") return SweepAxis::validation_cost;
  throw std::invalid_argument(
      "sweep axis must be one of mining_cost, allowed_error, target_coverage, validation_cost; "
      "got \"" +
      name + "\"");
}

std::string sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::mining_cost: return "mining_cost";
    case SweepAxis::allowed_error: return "allowed_error";
    case SweepAxis::target_coverage: return "target_coverage";
    case SweepAxis::validation_cost: return "validation_cost";
  }
  throw std::invalid_argument("sweep_axis_name: unknown axis");
}

std::vector<SweepRow> sensitivity_sweep(const AcquisitionMetaModel& mining,
                                        const AcquisitionMetaModel& generation,
                                        const QualityRequirements& req, SweepAxis axis,
                                        std::span<const double> values,
                                        const PlanOptions& options, unsigned threads) {
  require(!values.empty(), "sensitivity_sweep: values must be non-empty");

  std::vector<SweepRow> rows(values.size());
  std::vector<std::exception_ptr> failures(values.size());
  parallel_chunks(values.size(), threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        AcquisitionMetaModel mining_case = mining;
        AcquisitionMetaModel generation_case = generation;
        QualityRequirements req_case = req;
        switch (axis) {
          case SweepAxis::mining_cost: mining_case.costs.gaining = values[i]; break;
          case SweepAxis::allowed_error: req_case.allowed_error = values[i]; break;
          case SweepAxis::target_coverage: req_case.target_coverage = values[i]; break;
          case SweepAxis::validation_cost: generation_case.costs.validation = values[i]; break;
        }
        const AcquisitionPlan plan =
            optimize_acquisition(mining_case, generation_case, req_case, options);
        SweepRow row;
        row.axis_value = values[i];
        row.feasible = plan.feasible;
        if (plan.feasible) {
          row.total_cost = plan.total_cost;
          row.n_mine = plan.n_mine;
          row.n_gen = plan.n_gen;
          row.n_check = plan.check.n_check;
        }
        rows[i] = row;
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  });
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  return rows;
}

}  // namespace covplan
