#include "covplan/metamodel.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "covplan/errors.hpp"
#include "covplan/parallel.hpp"
#include "covplan/rng.hpp"

namespace covplan {

void CostAttributes::validate() const {
  for (double v : {setup, gaining, validation})
    if (!(std::isfinite(v) && v >= 0.0))
      throw std::invalid_argument("CostAttributes: costs must be finite and >= 0");
}

ErrorRateFunction::ErrorRateFunction(
    std::vector<std::pair<std::int64_t, double>> samples)
    : samples_(std::move(samples)) {
  std::int64_t prev = 0;
  bool first = true;
  for (const auto& [k, e] : samples_) {
    if (k < 1) throw std::invalid_argument("ErrorRateFunction: input counts must be >= 1");
    if (!first && k <= prev)
      throw std::invalid_argument("ErrorRateFunction: input counts must be strictly increasing");
    if (!(std::isfinite(e) && e >= 0.0 && e <= 1.0))
      throw std::invalid_argument("ErrorRateFunction: rates must lie in [0, 1]");
    prev = k;
    first = false;
  }

  // Pool adjacent violators, enforcing a non-increasing sequence of means.
  struct Block {
    double sum;
    std::size_t n;
    double mean() const { return sum / static_cast<double>(n); }
  };
  std::vector<Block> blocks;
  for (const auto& [k, e] : samples_) {
    blocks.push_back({e, 1});
    while (blocks.size() >= 2 &&
           blocks[blocks.size() - 2].mean() < blocks.back().mean()) {
      blocks[blocks.size() - 2].sum += blocks.back().sum;
      blocks[blocks.size() - 2].n += blocks.back().n;
      blocks.pop_back();
    }
  }
  regressed_.reserve(samples_.size());
  for (const auto& b : blocks)
    for (std::size_t i = 0; i < b.n; ++i) regressed_.push_back(b.mean());
}

double ErrorRateFunction::evaluate(double input_count) const {
  if (samples_.empty())
    throw std::invalid_argument("ErrorRateFunction: no samples");
  if (!(std::isfinite(input_count) && input_count > 0.0))
    throw std::invalid_argument("ErrorRateFunction: input count must be positive");
  const double k_min = static_cast<double>(samples_.front().first);
  const double k_max = static_cast<double>(samples_.back().first);
  if (input_count < k_min)
    throw std::domain_error("ErrorRateFunction: query below the sampled grid");
  if (input_count >= k_max) return regressed_.back();

  std::size_t i = 0;
  while (static_cast<double>(samples_[i + 1].first) < input_count) ++i;
  const double lo = std::log(static_cast<double>(samples_[i].first));
  const double hi = std::log(static_cast<double>(samples_[i + 1].first));
  const double w = (std::log(input_count) - lo) / (hi - lo);
  return regressed_[i] + w * (regressed_[i + 1] - regressed_[i]);
}

void AcquisitionMetaModel::validate() const {
  costs.validate();
  if (coverage_models.empty())
    throw std::invalid_argument("AcquisitionMetaModel: at least one coverage model required");
  std::int64_t prev = -1;
  for (const auto& [k, model] : coverage_models) {
    if (k < 0) throw std::invalid_argument("AcquisitionMetaModel: negative entry point");
    if (k <= prev && prev >= 0)
      throw std::invalid_argument("AcquisitionMetaModel: entry points must be strictly increasing");
    if (!(model.a > 0.0 && model.b > 0.0 && model.c > 0.0 && model.v_pre >= 0.0))
      throw std::invalid_argument("AcquisitionMetaModel: malformed coverage model");
    prev = k;
  }
  if (kind == AcquisitionKind::mining) {
    if (coverage_models.size() != 1 || coverage_models[0].first != 0)
      throw std::invalid_argument("AcquisitionMetaModel: mining requires a single entry at 0");
    if (!error_rate.empty())
      throw std::invalid_argument("AcquisitionMetaModel: mining carries no error samples");
  } else {
    if (error_rate.empty())
      throw std::invalid_argument("AcquisitionMetaModel: generation requires error samples");
  }
}

double measure_error_rate(std::span<const ParameterPoint> generated,
                          const ReferenceVolume& ref) {
  if (generated.empty())
    throw std::invalid_argument("measure_error_rate: no generated points");
  if (generated.size() < 1000)
    std::cerr << "warning: error rate measured on only " << generated.size()
              << " points\n";
  std::size_t outside = 0;
  for (const auto& p : generated) {
    if (p.dims() != ref.space().dims())
      throw std::invalid_argument("measure_error_rate: point dimension mismatch");
    if (!ref.contains(p)) ++outside;
  }
  return static_cast<double>(outside) / static_cast<double>(generated.size());
}

double evaluate_error_rate(const AcquisitionMetaModel& model, double input_count) {
  if (model.kind == AcquisitionKind::mining) return 0.0;
  return model.error_rate.evaluate(input_count);
}

AcquisitionMetaModel fit_generation_metamodel(std::span<const std::int64_t> input_grid,
                                              std::span<const ParameterPoint> mined_points,
                                              const GeneratorFactory& generator,
                                              const ReferenceVolume& ref,
                                              std::int64_t per_grid_sample,
                                              const SampleCloud& cloud,
                                              const MetamodelFitConfig& config) {
  if (input_grid.empty())
    throw std::invalid_argument("fit_generation_metamodel: empty input grid");
  std::int64_t prev = 0;
  for (std::size_t i = 0; i < input_grid.size(); ++i) {
    if (input_grid[i] < 1)
      throw std::invalid_argument("fit_generation_metamodel: grid entries must be >= 1");
    if (i > 0 && input_grid[i] <= prev)
      throw std::invalid_argument("fit_generation_metamodel: grid must be strictly increasing");
    prev = input_grid[i];
  }
  if (static_cast<std::size_t>(input_grid.back()) > mined_points.size())
    throw std::invalid_argument(
        "fit_generation_metamodel: grid exceeds available mined points");
  if (per_grid_sample < 1)
    throw std::invalid_argument("fit_generation_metamodel: per_grid_sample must be >= 1");
  if (!generator) throw std::invalid_argument("fit_generation_metamodel: missing generator");
  if (static_cast<int>(config.semi_axes.size()) != cloud.dims())
    throw std::invalid_argument("fit_generation_metamodel: semi_axes dimension mismatch");
  config.costs.validate();

  struct Entry {
    double error = 0.0;
    WeibullCoverageModel model;
    std::exception_ptr failure;
  };
  std::vector<Entry> entries(input_grid.size());

  parallel_chunks(input_grid.size(), config.threads,
                  [&](std::size_t, std::size_t begin, std::size_t end) {
    SampleCloud local = cloud;
    for (std::size_t g = begin; g < end; ++g) {
      Entry& entry = entries[g];
      const auto k = static_cast<std::size_t>(input_grid[g]);
      const std::span<const ParameterPoint> seed_data = mined_points.subspan(0, k);
      try {
        PointSource source = generator(seed_data, stream_seed(config.seed, g));
        std::vector<ParameterPoint> generated;
        generated.reserve(static_cast<std::size_t>(per_grid_sample));
        for (std::int64_t i = 0; i < per_grid_sample; ++i) generated.push_back(source());

        entry.error = measure_error_rate(generated, ref);

        std::vector<ParameterPoint> valid;
        valid.reserve(generated.size());
        for (auto& p : generated)
          if (ref.contains(p)) valid.push_back(std::move(p));

        // Volume already covered by the seed data becomes the fit's offset.
        const auto pre_curve = coverage_curve(seed_data, config.semi_axes, local);
        const double v_pre = pre_curve.empty() ? 0.0 : pre_curve.back().volume;

        // Continue marking the same cloud with the valid generated points.
        const CloudIndex index(local, config.semi_axes);
        const double box = local.space().box_volume();
        const double n = static_cast<double>(local.size());
        std::vector<CurvePoint> curve;
        curve.reserve(valid.size());
        std::size_t cum = local.covered_count();
        std::int64_t count = 0;
        for (const auto& p : valid) {
          cum += local.mark(p.coords, config.semi_axes, index);
          curve.push_back({++count, box * static_cast<double>(cum) / n});
        }

        try {
          entry.model = fit_weibull(curve, v_pre, config.fit);
        } catch (const DataError&) {
          // No coverage growth beyond the seed data (a perfect replayer, or
          // nothing valid): describe it as instantly saturated at v_pre.
          entry.model = {1e-9 * std::max(v_pre, 1.0), 1.0, 1.0, v_pre};
        }
      } catch (...) {
        entry.failure = std::current_exception();
      }
    }
  });

  std::string completed;
  for (std::size_t g = 0; g < entries.size(); ++g) {
    if (entries[g].failure) {
      // Contract violations propagate untouched; generator/runtime failures
      // abort with the grid entries that did complete.
      try {
        std::rethrow_exception(entries[g].failure);
      } catch (const std::logic_error&) {
        throw;
      } catch (const std::exception& e) {
        std::string msg = "fit_generation_metamodel: entry " +
                          std::to_string(input_grid[g]) + " failed (" + e.what() + ")";
        msg += completed.empty() ? "; no entries completed"
                                 : "; completed entries: " + completed;
        throw DataError(msg);
      }
    }
    if (!completed.empty()) completed += ", ";
    completed += std::to_string(input_grid[g]);
  }

  AcquisitionMetaModel model;
  model.name = config.name;
  model.kind = AcquisitionKind::generation;
  model.costs = config.costs;
  std::vector<std::pair<std::int64_t, double>> samples;
  for (std::size_t g = 0; g < entries.size(); ++g) {
    samples.emplace_back(input_grid[g], entries[g].error);
    model.coverage_models.emplace_back(input_grid[g], entries[g].model);
  }
  model.error_rate = ErrorRateFunction(std::move(samples));
  model.validate();
  return model;
}

}  // namespace covplan
