#pragma once

#include <cstdint>
#include <vector>

#include "covplan/geometry.hpp"
#include "covplan/rng.hpp"

namespace covplan {

struct GaussianMixture {
  std::vector<double> weights;             // positive, need not sum to 1
  std::vector<std::vector<double>> means;  // one per component
  std::vector<std::vector<double>> sigmas; // per-dimension std deviations
};

// Deterministic scenario source; identical seeds replay identical streams.
class SyntheticSource {
 public:
  // Uniform over the space box.
  static SyntheticSource uniform_box(ParameterSpace space, std::uint64_t seed);

  // Independent per-dimension normals around a weighted component choice.
  // Draws may fall outside any space box; consumers clip or reject.
  static SyntheticSource gaussian_mixture(GaussianMixture params, std::uint64_t seed);

  // Imitation generator with a tunable flaw: with probability
  // leak / sqrt(|seed_data|) a draw "leaks" uniformly over the whole box;
  // otherwise it resamples near a random seed point, inside that point's
  // kernel (clamped to the box). Quality improves with more seed data.
  static SyntheticSource degradable(std::vector<ParameterPoint> seed_data, double leak,
                                    std::vector<double> semi_axes, ParameterSpace space,
                                    std::uint64_t seed);

  // Replays the seed data verbatim, cycling; test double for a perfect
  // generator that contributes nothing new.
  static SyntheticSource replay(std::vector<ParameterPoint> seed_data);

  int dims() const { return dims_; }
  ParameterPoint draw_one();

 private:
  SyntheticSource() : rng_(0) {}

  enum class Kind { uniform, mixture, degradable, replay };
  Kind kind_ = Kind::uniform;
  int dims_ = 0;
  Xoshiro256pp rng_;

  std::vector<double> lower_, upper_;          // uniform / degradable box
  GaussianMixture mix_;
  std::vector<double> cum_weights_;
  std::vector<ParameterPoint> seed_data_;      // degradable / replay
  std::vector<double> semi_axes_;
  double leak_eff_ = 0.0;
  std::size_t cursor_ = 0;
};

// Draws `count` points; count 0 yields an empty list.
std::vector<ParameterPoint> draw(SyntheticSource& source, std::int64_t count);

}  // namespace covplan
