#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "covplan/geometry.hpp"

namespace covplan {

// Saturating coverage model: value(x) = a * (1 - exp(-b * x^c)) + v_pre.
struct WeibullCoverageModel {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double v_pre = 0.0;

  double value(double x) const;
  double saturation() const { return a + v_pre; }
};

struct FitOptions {
  int max_iterations = 200;        // per start
  double rel_tolerance = 1e-9;     // relative parameter change stop rule
  bool require_monotone = true;    // reject non-monotone volume curves

  // Multi-start grids; a starts at {A, 1.5A} with A = max(V) - v_pre.
  std::vector<double> b_starts = {1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0};
  std::vector<double> c_starts = {0.5, 1.0, 2.0};

  // Parameter box, enforced by clamping in log space.
  double a_min = 1e-12, a_max = 1e12;
  double b_min = 1e-12, b_max = 1e6;
  double c_min = 0.05, c_max = 20.0;
};

// Least-squares fit of (a, b, c) with v_pre held fixed. Throws DataError on
// fewer than 8 points or a flat (no-growth) curve; std::invalid_argument on
// malformed curves.
WeibullCoverageModel fit_weibull(std::span<const CurvePoint> curve, double v_pre,
                                 const FitOptions& options = {});

struct FitDiagnostics {
  int replicates = 0;                         // attempted bootstrap fits
  int failed = 0;                             // replicates that threw
  std::array<double, 3> param_mean{};         // mean of (a, b, c) over successes
  std::array<double, 3> param_cv{};           // sample CV of (a, b, c)
  double rss = 0.0;                           // residual sum of squares, central fit
  bool converged = false;                     // cv(a) <= cv_threshold
  double cv_threshold = 0.05;
};

struct BootstrapFit {
  WeibullCoverageModel model;  // central fit on the caller-given order
  FitDiagnostics diagnostics;
};

// Repeats coverage_curve + fit over `replicates` random permutations of the
// input order (replicate r uses substream r of `seed`), plus one central fit
// on the given order. Throws DataError when more than half the replicates
// fail. Deterministic for fixed inputs regardless of `threads`.
BootstrapFit bootstrap_fit(std::span<const ParameterPoint> points,
                           std::span<const double> semi_axes, const SampleCloud& cloud,
                           int replicates, std::uint64_t seed, double v_pre = 0.0,
                           double cv_threshold = 0.05, const FitOptions& options = {},
                           unsigned threads = 1);

// volume / (a + v_pre), clamped to [0, 1]. Throws std::domain_error when
// volume lies outside [v_pre, a + v_pre] beyond numerical slack.
double coverage_coefficient(const WeibullCoverageModel& model, double volume);

// Smallest integer x with value(x) >= target_coverage * (a + v_pre).
// target_coverage must lie in (0, 1); targets at or below v_pre return 0.
std::int64_t required_count(const WeibullCoverageModel& model, double target_coverage);

// Reported upper envelope on predictions: coverage cannot exceed v_pre plus
// x disjoint kernels. Not used in fitting.
double prediction_envelope(const WeibullCoverageModel& model, double x,
                           double kernel_volume);

}  // namespace covplan
