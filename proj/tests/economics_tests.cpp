#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "covplan/economics.hpp"
#include "covplan/metamodel.hpp"
#include "covplan/rng.hpp"

using namespace covplan;

namespace {

// --- exhaustive references -------------------------------------------------
// The optimizers promise to equal a full scan of the refined e_opt grid,
// smallest-e tie-break included. These helpers rebuild that scan from the
// public counting primitives only.

struct ScanResult {
  double e_opt = 0.0;
  std::int64_t n_improv = 0;
  std::int64_t n_rand = 0;
  std::int64_t n_rand_corr = 0;
  std::int64_t n_check = std::numeric_limits<std::int64_t>::max();
};

std::int64_t capped_improvement(std::int64_t n, double e_initial, double e_opt,
                                bool unscaled) {
  const std::int64_t raw = unscaled ? improvement_count_unscaled(e_initial, e_opt)
                                    : improvement_count(n, e_initial, e_opt);
  return std::min(raw, n);
}

std::int64_t capped_audit(std::int64_t n, double e_opt, const QualityRequirements& req,
                          bool mandate) {
  std::int64_t raw = cochran_sample(e_opt, req.allowed_error - e_opt, req.confidence_z);
  if (mandate && raw == 0) raw = 1;
  return std::min(raw, n);
}

ScanResult exhaustive_check(std::int64_t n, double e_initial,
                            const QualityRequirements& req, const CheckOptions& opt) {
  ScanResult best;
  const double e_max = std::min(e_initial, req.allowed_error * (1.0 - 1e-6));
  const std::int64_t refined =
      static_cast<std::int64_t>(opt.coarse_intervals) * opt.refine_factor;
  for (std::int64_t j = 0; j <= refined; ++j) {
    ScanResult cand;
    cand.e_opt = e_max * (static_cast<double>(j) / static_cast<double>(refined));
    cand.n_improv = capped_improvement(n, e_initial, cand.e_opt, opt.unscaled_improvement);
    cand.n_rand = capped_audit(n, cand.e_opt, req, opt.mandate_audit);
    cand.n_rand_corr = corrected_sample(cand.n_rand, cand.n_improv, n);
    cand.n_check = cand.n_improv + cand.n_rand_corr;
    if (cand.n_check < best.n_check) best = cand;
  }
  return best;
}

struct ScanPlan {
  bool feasible = false;
  std::int64_t n_mine = 0;
  std::int64_t n_gen = 0;
  std::int64_t n_check = 0;
  double total_cost = 0.0;
  double best_ratio = 0.0;
};

ScanPlan exhaustive_acquisition(const AcquisitionMetaModel& mining,
                                const AcquisitionMetaModel& generation,
                                const QualityRequirements& req, const CheckOptions& opt) {
  const double mining_sat = mining.coverage_models.front().second.saturation();
  const double target_volume = req.target_coverage * mining_sat;
  ScanPlan best;
  for (const auto& [entry, model] : generation.coverage_models) {
    best.best_ratio = std::max(best.best_ratio, model.saturation() / mining_sat);
    const double coverage_target = target_volume / model.saturation();
    if (!(coverage_target < 1.0)) continue;
    const std::int64_t n_gen = required_count(model, coverage_target);
    const double e_initial =
        n_gen > 0 ? evaluate_error_rate(generation, static_cast<double>(entry)) : 0.0;
    if (e_initial >= 1.0) continue;

    ScanResult check;
    if (n_gen == 0) {
      check = ScanResult{0.0, 0, 0, 0, 0};
    } else if (e_initial == 0.0) {
      check = ScanResult{0.0, 0, 0, 0, 0};
      if (opt.mandate_audit) {
        check.n_rand = std::min<std::int64_t>(1, n_gen);
        check.n_rand_corr = check.n_rand;
        check.n_check = check.n_rand;
      }
    } else if (req.allowed_error == 0.0) {
      check = ScanResult{};
      check.e_opt = 0.0;
      check.n_improv = capped_improvement(n_gen, e_initial, 0.0, opt.unscaled_improvement);
      check.n_rand = 0;
      check.n_rand_corr = 0;
      check.n_check = check.n_improv;
    } else {
      check = exhaustive_check(n_gen, e_initial, req, opt);
    }

    // Mirror the plan's cost arithmetic term by term so equal-cost ties
    // resolve identically.
    const double mining_cost = static_cast<double>(entry) * mining.costs.gaining;
    const double replacement = static_cast<double>(check.n_improv) * e_initial *
                               generation.costs.gaining;
    const double generation_cost =
        static_cast<double>(n_gen) * generation.costs.gaining + replacement;
    const double checking_cost =
        static_cast<double>(check.n_check) * generation.costs.validation;
    const double setup_cost = (entry > 0 ? mining.costs.setup : 0.0) +
                              (n_gen > 0 ? generation.costs.setup : 0.0);
    const double total = setup_cost + mining_cost + generation_cost + checking_cost;
    if (!best.feasible || total < best.total_cost) {
      best.feasible = true;
      best.n_mine = entry;
      best.n_gen = n_gen;
      best.n_check = check.n_check;
      best.total_cost = total;
    }
  }
  return best;
}

// --- fixtures ----------------------------------------------------------------

WeibullCoverageModel weibull(double a, double b, double c, double v_pre) {
  return {a, b, c, v_pre};
}

AcquisitionMetaModel mining_fixture(double gaining = 240.0, double setup = 500.0) {
  AcquisitionMetaModel m;
  m.name = "field";
  m.kind = AcquisitionKind::mining;
  m.costs = {setup, gaining, 0.0};
  m.coverage_models.emplace_back(0, weibull(100.0, 0.01, 1.0, 0.0));
  return m;
}

// Entry 100 saturates at 70 (below an 80-volume target); 500 and 2000 clear it.
AcquisitionMetaModel generation_fixture() {
  AcquisitionMetaModel g;
  g.name = "imitator";
  g.kind = AcquisitionKind::generation;
  g.costs = {50.0, 2.0, 5.0};
  g.error_rate = ErrorRateFunction({{100, 0.40}, {500, 0.15}, {2000, 0.03}});
  g.coverage_models.emplace_back(100, weibull(65.0, 0.02, 1.0, 5.0));
  g.coverage_models.emplace_back(500, weibull(70.0, 0.015, 1.0, 20.0));
  g.coverage_models.emplace_back(2000, weibull(65.0, 0.01, 1.0, 45.0));
  return g;
}

QualityRequirements default_req() { return {0.05, 1.96, 0.8}; }

void check_plan_invariants(const CheckPlan& plan, std::int64_t n,
                           const QualityRequirements& req, double validation_cost) {
  CHECK(plan.n_check == plan.n_improv + plan.n_rand_corr);
  CHECK(plan.n_rand_corr <= plan.n_rand);
  CHECK(plan.n_improv >= 0);
  CHECK(plan.n_improv <= n);
  CHECK(plan.n_rand <= n);
  CHECK(plan.n_check <= n);
  CHECK(plan.check_cost == static_cast<double>(plan.n_check) * validation_cost);
  if (!plan.forced_full_sweep && req.allowed_error > 0.0)
    CHECK(plan.e_opt < req.allowed_error);
}

}  // namespace

TEST_CASE("improvement count scales the error reduction by the dataset") {
  CHECK(improvement_count(10000, 0.10, 0.05) == 5000);
  CHECK(improvement_count(10000, 0.10, 0.10) == 0);
  CHECK(improvement_count(10000, 0.10, 0.0) == 10000);
  CHECK(improvement_count(10000, 0.0, 0.0) == 0);
  CHECK(improvement_count(0, 0.5, 0.1) == 0);
  CHECK(improvement_count(10, 0.3, 0.2) == 4);  // ceil(10/3)
  CHECK_THROWS_AS(improvement_count(10, 0.1, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(improvement_count(-1, 0.1, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(improvement_count(10, 1.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(improvement_count(10, 0.1, -0.01), std::invalid_argument);
}

TEST_CASE("the unscaled compatibility form saturates at one") {
  CHECK(improvement_count_unscaled(0.10, 0.05) == 1);
  CHECK(improvement_count_unscaled(0.10, 0.10) == 0);
  CHECK(improvement_count_unscaled(0.0, 0.0) == 0);
  CHECK(improvement_count_unscaled(1.0, 0.0) == 1);
  CHECK_THROWS_AS(improvement_count_unscaled(0.1, 0.2), std::invalid_argument);
}

TEST_CASE("audit sample size matches pinned evaluations") {
  CHECK(cochran_sample(0.05, 0.02, 1.96) == 457);
  CHECK(cochran_sample(0.5, 0.1, 2.0) == 100);
  CHECK(cochran_sample(0.0, 0.02, 1.96) == 0);
  CHECK(cochran_sample(1.0, 0.02, 1.96) == 0);
  CHECK_THROWS_AS(cochran_sample(0.05, 0.0, 1.96), std::invalid_argument);
  CHECK_THROWS_AS(cochran_sample(0.05, -0.1, 1.96), std::invalid_argument);
  CHECK_THROWS_AS(cochran_sample(1.5, 0.1, 1.96), std::invalid_argument);
  CHECK_THROWS_AS(cochran_sample(0.5, 0.1, 0.0), std::invalid_argument);
}

TEST_CASE("overlap credit shrinks the audit sample") {
  CHECK(corrected_sample(457, 5000, 10000) == 229);  // ceil(228.5)
  CHECK(corrected_sample(457, 0, 10000) == 457);
  CHECK(corrected_sample(457, 10000, 10000) == 0);
  CHECK(corrected_sample(0, 5000, 10000) == 0);
  CHECK_THROWS_AS(corrected_sample(457, 5000, 0), std::invalid_argument);
  CHECK_THROWS_AS(corrected_sample(457, 11, 10), std::invalid_argument);
  CHECK_THROWS_AS(corrected_sample(-1, 0, 10), std::invalid_argument);
}

TEST_CASE("check optimization equals the exhaustive grid scan") {
  QualityRequirements req{0.06, 1.96, 0.8};
  const CheckOptions opt;
  const CheckPlan plan = optimize_check(10000, 0.10, req, 1.0, opt);
  const ScanResult oracle = exhaustive_check(10000, 0.10, req, opt);
  CHECK(plan.n_check == oracle.n_check);
  CHECK(plan.e_opt == oracle.e_opt);
  CHECK(plan.n_improv == oracle.n_improv);
  CHECK(plan.n_rand == oracle.n_rand);
  CHECK(plan.n_rand_corr == oracle.n_rand_corr);
  CHECK(!plan.forced_full_sweep);
  CHECK(plan.n_check < 10000);  // strictly better than the full sweep here
  check_plan_invariants(plan, 10000, req, 1.0);
}

TEST_CASE("check optimization equals the exhaustive scan on randomized cases") {
  Xoshiro256pp rng(2025);
  for (int trial = 0; trial < 25; ++trial) {
    CAPTURE(trial);
    const std::int64_t n = 1 + static_cast<std::int64_t>(rng.uniform_index(100000));
    const double e_initial = rng.uniform(0.001, 0.9);
    QualityRequirements req;
    req.allowed_error = rng.uniform(0.001, 0.5);
    req.confidence_z = (trial % 2 == 0) ? 1.96 : 2.576;
    req.target_coverage = 0.8;
    CheckOptions opt;
    if (trial % 3 == 0) {
      opt.coarse_intervals = 199;
      opt.refine_factor = 7;
    }
    opt.mandate_audit = trial % 5 == 0;
    opt.unscaled_improvement = trial % 7 == 0;

    const CheckPlan plan = optimize_check(n, e_initial, req, 1.0, opt);
    const ScanResult oracle = exhaustive_check(n, e_initial, req, opt);
    CHECK(plan.n_check == oracle.n_check);
    CHECK(plan.e_opt == oracle.e_opt);
    CHECK(plan.n_improv == oracle.n_improv);
    CHECK(plan.n_rand == oracle.n_rand);
    CHECK(plan.n_rand_corr == oracle.n_rand_corr);
    check_plan_invariants(plan, n, req, 1.0);

    // Never worse than the trivial candidates sitting on the same grid.
    CHECK(plan.n_check <= n);
    if (e_initial <= req.allowed_error * (1.0 - 1e-6))
      CHECK(plan.n_check <= capped_audit(n, e_initial, req, opt.mandate_audit));
  }
}

TEST_CASE("a wide tolerance keeps the error where it already is") {
  QualityRequirements req{0.5, 1.96, 0.8};
  const CheckPlan plan = optimize_check(10000, 0.01, req);
  CHECK(plan.e_opt == 0.01);
  CHECK(plan.n_improv == 0);
  CHECK(plan.n_rand == 1);  // ceil(1.96^2 * 0.01 * 0.99 / 0.49^2)
  CHECK(plan.n_check == 1);
  CHECK(!plan.forced_full_sweep);
}

TEST_CASE("an already clean dataset needs no checking") {
  QualityRequirements req = default_req();
  const CheckPlan plan = optimize_check(5000, 0.0, req);
  CHECK(plan.n_check == 0);
  CHECK(plan.n_improv == 0);
  CHECK(plan.n_rand == 0);
  CHECK(plan.check_cost == 0.0);
  CHECK(!plan.forced_full_sweep);

  CheckOptions audit;
  audit.mandate_audit = true;
  const CheckPlan audited = optimize_check(5000, 0.0, req, 3.0, audit);
  CHECK(audited.n_rand == 1);
  CHECK(audited.n_check == 1);
  CHECK(audited.check_cost == 3.0);

  const CheckPlan empty = optimize_check(0, 0.0, req, 3.0, audit);
  CHECK(empty.n_check == 0);
  CHECK(empty.check_cost == 0.0);
}

TEST_CASE("zero allowed error forces the full sweep") {
  QualityRequirements req{0.0, 1.96, 0.8};
  const CheckPlan plan = optimize_check(5000, 0.2, req, 2.0);
  CHECK(plan.forced_full_sweep);
  CHECK(plan.e_opt == 0.0);
  CHECK(plan.n_improv == 5000);
  CHECK(plan.n_rand == 0);
  CHECK(plan.n_check == 5000);
  CHECK(plan.check_cost == 10000.0);

  const CheckPlan clean = optimize_check(5000, 0.0, req);
  CHECK(!clean.forced_full_sweep);
  CHECK(clean.n_check == 0);
}

TEST_CASE("check optimization rejects malformed inputs") {
  QualityRequirements req = default_req();
  CHECK_THROWS_AS(optimize_check(-1, 0.1, req), std::invalid_argument);
  CHECK_THROWS_AS(optimize_check(10, 1.0, req), std::invalid_argument);
  CHECK_THROWS_AS(optimize_check(10, -0.1, req), std::invalid_argument);
  CHECK_THROWS_AS(optimize_check(10, 0.1, req, -1.0), std::invalid_argument);
  CheckOptions opt;
  opt.coarse_intervals = 0;
  CHECK_THROWS_AS(optimize_check(10, 0.1, req, 1.0, opt), std::invalid_argument);
  opt.coarse_intervals = 999;
  opt.refine_factor = 0;
  CHECK_THROWS_AS(optimize_check(10, 0.1, req, 1.0, opt), std::invalid_argument);

  QualityRequirements bad = default_req();
  bad.allowed_error = 1.0;
  CHECK_THROWS_AS(optimize_check(10, 0.1, bad), std::invalid_argument);
  bad = default_req();
  bad.target_coverage = 0.0;
  CHECK_THROWS_AS(optimize_check(10, 0.1, bad), std::invalid_argument);
  bad = default_req();
  bad.confidence_z = 0.0;
  CHECK_THROWS_AS(optimize_check(10, 0.1, bad), std::invalid_argument);
}

TEST_CASE("validation cost scales the bill, not the counts") {
  QualityRequirements req = default_req();
  const CheckPlan cheap = optimize_check(20000, 0.12, req, 1.0);
  const CheckPlan pricey = optimize_check(20000, 0.12, req, 2.5);
  CHECK(cheap.n_check == pricey.n_check);
  CHECK(cheap.e_opt == pricey.e_opt);
  CHECK(pricey.check_cost == static_cast<double>(pricey.n_check) * 2.5);
}

TEST_CASE("acquisition planning equals brute-force enumeration on the fixture") {
  const AcquisitionMetaModel mining = mining_fixture();
  const AcquisitionMetaModel generation = generation_fixture();
  const QualityRequirements req = default_req();
  const PlanOptions options;

  const AcquisitionPlan plan = optimize_acquisition(mining, generation, req, options);
  const ScanPlan oracle = exhaustive_acquisition(mining, generation, req, options.check);
  REQUIRE(oracle.feasible);
  CHECK(plan.feasible);
  CHECK(plan.n_mine == oracle.n_mine);
  CHECK(plan.n_gen == oracle.n_gen);
  CHECK(plan.check.n_check == oracle.n_check);
  CHECK(plan.total_cost == oracle.total_cost);

  // Structural bookkeeping of the winning plan.
  CHECK(plan.total_cost == plan.setup_cost + plan.mining_cost + plan.generation_cost +
                               plan.checking_cost);
  CHECK(plan.achieved_coverage >= req.target_coverage);
  CHECK(plan.check.e_opt < req.allowed_error);
  check_plan_invariants(plan.check, plan.n_gen, req, generation.costs.validation);
}

TEST_CASE("entries that cannot reach the target are excluded") {
  const AcquisitionMetaModel mining = mining_fixture();
  AcquisitionMetaModel generation = generation_fixture();
  // Keep only the infeasible 100 entry and the feasible 500 entry.
  generation.coverage_models.pop_back();
  generation.error_rate = ErrorRateFunction({{100, 0.40}, {500, 0.15}});

  const AcquisitionPlan plan = optimize_acquisition(mining, generation, default_req());
  CHECK(plan.feasible);
  CHECK(plan.n_mine == 500);  // entry 100 saturates at 70 < 80
}

TEST_CASE("prohibitive generation degenerates to pure mining") {
  const AcquisitionMetaModel mining = mining_fixture();
  AcquisitionMetaModel generation;
  generation.name = "imitator";
  generation.kind = AcquisitionKind::generation;
  generation.costs = {1e9, 1e9, 1e9};
  generation.error_rate = ErrorRateFunction({{100, 0.40}, {3000, 0.01}});
  generation.coverage_models.emplace_back(100, weibull(90.0, 0.01, 1.0, 2.0));
  generation.coverage_models.emplace_back(3000, weibull(10.0, 0.01, 1.0, 85.0));

  const AcquisitionPlan plan = optimize_acquisition(mining, generation, default_req());
  CHECK(plan.feasible);
  CHECK(plan.n_mine == 3000);  // v_pre 85 already clears the 80-volume target
  CHECK(plan.n_gen == 0);
  CHECK(plan.check.n_check == 0);
  CHECK(plan.generation_cost == 0.0);
  CHECK(plan.checking_cost == 0.0);
  CHECK(plan.setup_cost == 500.0);  // no generation setup without generation
  CHECK(plan.total_cost == 500.0 + 3000.0 * 240.0);
  CHECK(plan.achieved_coverage == 0.85);
}

TEST_CASE("an unreachable target reports the best attainable coverage") {
  const AcquisitionMetaModel mining = mining_fixture();
  AcquisitionMetaModel generation;
  generation.name = "imitator";
  generation.kind = AcquisitionKind::generation;
  generation.costs = {50.0, 2.0, 5.0};
  generation.error_rate = ErrorRateFunction({{100, 0.3}, {500, 0.1}});
  generation.coverage_models.emplace_back(100, weibull(45.0, 0.01, 1.0, 5.0));  // sat 50
  generation.coverage_models.emplace_back(500, weibull(50.0, 0.01, 1.0, 20.0));  // sat 70

  const AcquisitionPlan plan = optimize_acquisition(mining, generation, default_req());
  CHECK(!plan.feasible);
  CHECK(plan.achieved_coverage == 0.7);
  CHECK(plan.n_mine == 0);
  CHECK(plan.n_gen == 0);
  CHECK(plan.total_cost == 0.0);
}

TEST_CASE("acquisition planning equals enumeration on randomized fixtures") {
  Xoshiro256pp rng(909);
  PlanOptions options;
  options.check = CheckOptions{99, 5, false, false};
  for (int trial = 0; trial < 10; ++trial) {
    CAPTURE(trial);
    AcquisitionMetaModel mining;
    mining.name = "field";
    mining.kind = AcquisitionKind::mining;
    mining.costs = {rng.uniform(0.0, 1000.0), rng.uniform(1.0, 500.0), 0.0};
    mining.coverage_models.emplace_back(0,
                                        weibull(rng.uniform(50.0, 150.0), 0.01, 1.0, 0.0));

    AcquisitionMetaModel generation;
    generation.name = "imitator";
    generation.kind = AcquisitionKind::generation;
    generation.costs = {rng.uniform(0.0, 100.0), rng.uniform(0.1, 10.0),
                        rng.uniform(0.1, 20.0)};
    const int entries = 3 + static_cast<int>(rng.uniform_index(3));
    std::vector<std::pair<std::int64_t, double>> errors;
    std::int64_t k = 0;
    for (int i = 0; i < entries; ++i) {
      k += 1 + static_cast<std::int64_t>(rng.uniform_index(2000));
      generation.coverage_models.emplace_back(
          k, weibull(rng.uniform(5.0, 120.0),
                     std::exp(rng.uniform(std::log(1e-3), std::log(0.1))),
                     rng.uniform(0.6, 1.6), rng.uniform(0.0, 60.0)));
      errors.emplace_back(k, rng.uniform(0.0, 0.9));
    }
    generation.error_rate = ErrorRateFunction(std::move(errors));

    QualityRequirements req;
    req.allowed_error = rng.uniform(0.01, 0.3);
    req.confidence_z = 1.96;
    req.target_coverage = rng.uniform(0.5, 0.95);

    const AcquisitionPlan plan = optimize_acquisition(mining, generation, req, options);
    const ScanPlan oracle = exhaustive_acquisition(mining, generation, req, options.check);
    CHECK(plan.feasible == oracle.feasible);
    if (oracle.feasible) {
      CHECK(plan.n_mine == oracle.n_mine);
      CHECK(plan.n_gen == oracle.n_gen);
      CHECK(plan.check.n_check == oracle.n_check);
      CHECK(plan.total_cost == oracle.total_cost);
      CHECK(plan.achieved_coverage >= req.target_coverage - 1e-12);
    } else {
      CHECK(plan.achieved_coverage == oracle.best_ratio);
    }
  }
}

TEST_CASE("model roles are enforced") {
  const AcquisitionMetaModel mining = mining_fixture();
  const AcquisitionMetaModel generation = generation_fixture();
  CHECK_THROWS_AS(optimize_acquisition(generation, mining, default_req()),
                  std::invalid_argument);
  CHECK_THROWS_AS(optimize_acquisition(mining, mining, default_req()),
                  std::invalid_argument);
  AcquisitionMetaModel hollow;
  hollow.kind = AcquisitionKind::generation;
  CHECK_THROWS_AS(optimize_acquisition(mining, hollow, default_req()),
                  std::invalid_argument);
}

TEST_CASE("a single-value sweep equals the direct call") {
  const AcquisitionMetaModel mining = mining_fixture();
  AcquisitionMetaModel generation = generation_fixture();
  const QualityRequirements req = default_req();

  const std::vector<double> values{7.5};
  const auto rows =
      sensitivity_sweep(mining, generation, req, SweepAxis::validation_cost, values);
  REQUIRE(rows.size() == 1);

  generation.costs.validation = 7.5;
  const AcquisitionPlan direct = optimize_acquisition(mining, generation, req);
  CHECK(rows[0].axis_value == 7.5);
  CHECK(rows[0].feasible == direct.feasible);
  CHECK(rows[0].total_cost == direct.total_cost);
  CHECK(rows[0].n_mine == direct.n_mine);
  CHECK(rows[0].n_gen == direct.n_gen);
  CHECK(rows[0].n_check == direct.check.n_check);
}

TEST_CASE("optimal cost trends follow the swept axis") {
  const AcquisitionMetaModel mining = mining_fixture();
  const AcquisitionMetaModel generation = generation_fixture();
  const QualityRequirements req = default_req();

  SUBCASE("mining cost up, total cost up") {
    const std::vector<double> values{90.0, 240.0, 740.0};
    const auto rows =
        sensitivity_sweep(mining, generation, req, SweepAxis::mining_cost, values);
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) CHECK(row.feasible);
    CHECK(rows[0].total_cost <= rows[1].total_cost);
    CHECK(rows[1].total_cost <= rows[2].total_cost);
  }
  SUBCASE("looser error budget, cheaper checks") {
    const std::vector<double> values{0.02, 0.05, 0.1, 0.2};
    const auto rows =
        sensitivity_sweep(mining, generation, req, SweepAxis::allowed_error, values);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(rows[i].total_cost <= rows[i - 1].total_cost);
      CHECK(rows[i].n_check <= rows[i - 1].n_check);
    }
  }
  SUBCASE("higher coverage target, higher cost") {
    const std::vector<double> values{0.6, 0.8, 0.88};
    const auto rows =
        sensitivity_sweep(mining, generation, req, SweepAxis::target_coverage, values);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].total_cost <= rows[1].total_cost);
    CHECK(rows[1].total_cost <= rows[2].total_cost);
  }
  SUBCASE("pricier validation, higher cost") {
    const std::vector<double> values{1.0, 5.0, 25.0};
    const auto rows =
        sensitivity_sweep(mining, generation, req, SweepAxis::validation_cost, values);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].total_cost <= rows[1].total_cost);
    CHECK(rows[1].total_cost <= rows[2].total_cost);
  }
}

TEST_CASE("infeasible sweep rows are zeroed and the sweep continues") {
  const AcquisitionMetaModel mining = mining_fixture();
  AcquisitionMetaModel generation;
  generation.name = "imitator";
  generation.kind = AcquisitionKind::generation;
  generation.costs = {50.0, 2.0, 5.0};
  generation.error_rate = ErrorRateFunction({{100, 0.3}, {500, 0.1}});
  generation.coverage_models.emplace_back(100, weibull(45.0, 0.01, 1.0, 5.0));
  generation.coverage_models.emplace_back(500, weibull(50.0, 0.01, 1.0, 20.0));

  const std::vector<double> values{0.4, 0.9};
  const auto rows = sensitivity_sweep(mining, generation, default_req(),
                                      SweepAxis::target_coverage, values);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].feasible);
  CHECK(rows[0].total_cost > 0.0);
  CHECK(!rows[1].feasible);
  CHECK(rows[1].total_cost == 0.0);
  CHECK(rows[1].n_mine == 0);
  CHECK(rows[1].n_gen == 0);
  CHECK(rows[1].n_check == 0);
  CHECK(rows[1].axis_value == 0.9);
}

TEST_CASE("sweeps are deterministic across thread counts and propagate errors") {
  const AcquisitionMetaModel mining = mining_fixture();
  const AcquisitionMetaModel generation = generation_fixture();
  const QualityRequirements req = default_req();
  const std::vector<double> values{90.0, 240.0, 740.0};

  const auto seq = sensitivity_sweep(mining, generation, req, SweepAxis::mining_cost,
                                     values, {}, 1);
  const auto par = sensitivity_sweep(mining, generation, req, SweepAxis::mining_cost,
                                     values, {}, 3);
  REQUIRE(seq.size() == par.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    CHECK(seq[i].total_cost == par[i].total_cost);
    CHECK(seq[i].n_mine == par[i].n_mine);
    CHECK(seq[i].n_gen == par[i].n_gen);
    CHECK(seq[i].n_check == par[i].n_check);
  }

  const std::vector<double> bad{0.05, -1.0};
  CHECK_THROWS_AS(
      sensitivity_sweep(mining, generation, req, SweepAxis::allowed_error, bad),
      std::invalid_argument);
  const std::vector<double> none;
  CHECK_THROWS_AS(
      sensitivity_sweep(mining, generation, req, SweepAxis::mining_cost, none),
      std::invalid_argument);
}

TEST_CASE("sweep axes round-trip by name") {
  for (SweepAxis axis : {SweepAxis::mining_cost, SweepAxis::allowed_error,
                         SweepAxis::target_coverage, SweepAxis::validation_cost})
    CHECK(sweep_axis_from_name(sweep_axis_name(axis)) == axis);
  CHECK_THROWS_AS(sweep_axis_from_name("phase_of_moon"), std::invalid_argument);
}
