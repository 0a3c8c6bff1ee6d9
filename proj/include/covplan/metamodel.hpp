#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "covplan/curve_fit.hpp"
#include "covplan/geometry.hpp"

namespace covplan {

struct CostAttributes {
  double setup = 0.0;       // one-time cost
  double gaining = 0.0;     // per-scenario acquisition cost
  double validation = 0.0;  // per-scenario check cost

  void validate() const;
};

// Error rate as a function of input (seed) data amount. Stores the raw
// samples; evaluation goes through a non-increasing isotonic regression of
// the rates (pool-adjacent-violators, unweighted) with piecewise linear
// interpolation in log(input count). Queries above the grid clamp to the
// last regressed value; queries below the grid are refused.
class ErrorRateFunction {
 public:
  ErrorRateFunction() = default;
  explicit ErrorRateFunction(std::vector<std::pair<std::int64_t, double>> samples);

  bool empty() const { return samples_.empty(); }
  const std::vector<std::pair<std::int64_t, double>>& samples() const { return samples_; }
  const std::vector<double>& regressed() const { return regressed_; }

  double evaluate(double input_count) const;

 private:
  std::vector<std::pair<std::int64_t, double>> samples_;
  std::vector<double> regressed_;
};

enum class AcquisitionKind { mining, generation };

// Everything the planner needs to know about one acquisition method: what a
// scenario costs, how often generated scenarios are invalid, and how
// coverage grows per entry point (amount of seed data the method starts
// from). Mining has a single entry at 0 and a zero error rate.
struct AcquisitionMetaModel {
  std::string name;
  AcquisitionKind kind = AcquisitionKind::generation;
  CostAttributes costs;
  ErrorRateFunction error_rate;  // empty for mining
  std::vector<std::pair<std::int64_t, WeibullCoverageModel>> coverage_models;

  void validate() const;
};

// Fraction of generated points falling outside the reference volume.
// Warns on stderr below 1,000 points (estimate is noisy).
double measure_error_rate(std::span<const ParameterPoint> generated,
                          const ReferenceVolume& ref);

// Error rate of the method at the given input amount; constant 0 for mining.
double evaluate_error_rate(const AcquisitionMetaModel& model, double input_count);

using PointSource = std::function<ParameterPoint()>;

// Builds a source from seed data; stream_seed pins the draw stream.
using GeneratorFactory =
    std::function<PointSource(std::span<const ParameterPoint> seed_data,
                              std::uint64_t stream_seed)>;

struct MetamodelFitConfig {
  std::string name = "generation";
  CostAttributes costs{};
  std::vector<double> semi_axes;  // coverage kernel radii
  std::uint64_t seed = 0;         // master seed for per-entry generator streams
  FitOptions fit{};
  unsigned threads = 1;
};

// Measures a generation method across the input grid: for each entry k the
// generator is seeded with the first k mined points, per_grid_sample points
// are drawn, the invalid fraction is recorded, and a coverage model is
// fitted over the valid draws on top of the volume already covered by those
// k mined points. Entries with no coverage growth get a saturated model
// (a ~ 0) rather than failing the whole grid.
AcquisitionMetaModel fit_generation_metamodel(std::span<const std::int64_t> input_grid,
                                              std::span<const ParameterPoint> mined_points,
                                              const GeneratorFactory& generator,
                                              const ReferenceVolume& ref,
                                              std::int64_t per_grid_sample,
                                              const SampleCloud& cloud,
                                              const MetamodelFitConfig& config);

}  // namespace covplan
