#include "covplan/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace covplan {

SyntheticSource SyntheticSource::uniform_box(ParameterSpace space, std::uint64_t seed) {
  SyntheticSource s;
  s.kind_ = Kind::uniform;
  s.dims_ = space.dims();
  s.lower_ = space.lower();
  s.upper_ = space.upper();
  s.rng_ = Xoshiro256pp(seed);
  return s;
}

SyntheticSource SyntheticSource::gaussian_mixture(GaussianMixture params,
                                                  std::uint64_t seed) {
  if (params.weights.empty() || params.weights.size() != params.means.size() ||
      params.weights.size() != params.sigmas.size())
    throw std::invalid_argument("gaussian_mixture: component lists must align");
  const auto m = params.means[0].size();
  if (m == 0) throw std::invalid_argument("gaussian_mixture: empty mean");
  double cum = 0.0;
  SyntheticSource s;
  for (std::size_t i = 0; i < params.weights.size(); ++i) {
    if (!(std::isfinite(params.weights[i]) && params.weights[i] > 0.0))
      throw std::invalid_argument("gaussian_mixture: weights must be positive");
    if (params.means[i].size() != m || params.sigmas[i].size() != m)
      throw std::invalid_argument("gaussian_mixture: component dimension mismatch");
    for (double sd : params.sigmas[i])
      if (!(std::isfinite(sd) && sd > 0.0))
        throw std::invalid_argument("gaussian_mixture: sigmas must be positive");
    cum += params.weights[i];
    s.cum_weights_.push_back(cum);
  }
  s.kind_ = Kind::mixture;
  s.dims_ = static_cast<int>(m);
  s.mix_ = std::move(params);
  s.rng_ = Xoshiro256pp(seed);
  return s;
}

SyntheticSource SyntheticSource::degradable(std::vector<ParameterPoint> seed_data,
                                            double leak, std::vector<double> semi_axes,
                                            ParameterSpace space, std::uint64_t seed) {
  if (seed_data.empty()) throw std::invalid_argument("degradable: empty seed data");
  if (!(std::isfinite(leak) && leak >= 0.0 && leak <= 1.0))
    throw std::invalid_argument("degradable: leak must lie in [0, 1]");
  if (static_cast<int>(semi_axes.size()) != space.dims())
    throw std::invalid_argument("degradable: semi_axes dimension mismatch");
  for (double p : semi_axes)
    if (!(std::isfinite(p) && p > 0.0))
      throw std::invalid_argument("degradable: semi-axes must be positive");
  for (const auto& p : seed_data)
    if (p.dims() != space.dims())
      throw std::invalid_argument("degradable: seed point dimension mismatch");

  SyntheticSource s;
  s.kind_ = Kind::degradable;
  s.dims_ = space.dims();
  s.lower_ = space.lower();
  s.upper_ = space.upper();
  s.leak_eff_ = leak / std::sqrt(static_cast<double>(seed_data.size()));
  s.seed_data_ = std::move(seed_data);
  s.semi_axes_ = std::move(semi_axes);
  s.rng_ = Xoshiro256pp(seed);
  return s;
}

SyntheticSource SyntheticSource::replay(std::vector<ParameterPoint> seed_data) {
  if (seed_data.empty()) throw std::invalid_argument("replay: empty seed data");
  SyntheticSource s;
  s.kind_ = Kind::replay;
  s.dims_ = seed_data[0].dims();
  for (const auto& p : seed_data)
    if (p.dims() != s.dims_)
      throw std::invalid_argument("replay: seed point dimension mismatch");
  s.seed_data_ = std::move(seed_data);
  return s;
}

ParameterPoint SyntheticSource::draw_one() {
  ParameterPoint p;
  p.coords.resize(static_cast<std::size_t>(dims_));
  switch (kind_) {
    case Kind::uniform: {
      for (int j = 0; j < dims_; ++j) {
        const auto js = static_cast<std::size_t>(j);
        p.coords[js] = lower_[js] + rng_.uniform01() * (upper_[js] - lower_[js]);
      }
      break;
    }
    case Kind::mixture: {
      const double u = rng_.uniform01() * cum_weights_.back();
      const auto it = std::upper_bound(cum_weights_.begin(), cum_weights_.end(), u);
      const auto k = static_cast<std::size_t>(it - cum_weights_.begin());
      const auto kk = std::min(k, cum_weights_.size() - 1);
      for (int j = 0; j < dims_; ++j) {
        const auto js = static_cast<std::size_t>(j);
        p.coords[js] = mix_.means[kk][js] + mix_.sigmas[kk][js] * rng_.normal();
      }
      break;
    }
    case Kind::degradable: {
      if (rng_.uniform01() < leak_eff_) {
        for (int j = 0; j < dims_; ++j) {
          const auto js = static_cast<std::size_t>(j);
          p.coords[js] = lower_[js] + rng_.uniform01() * (upper_[js] - lower_[js]);
        }
      } else {
        const auto idx = static_cast<std::size_t>(rng_.uniform_index(seed_data_.size()));
        // Uniform direction scaled into the kernel, then clamped to the box.
        // Clamping moves coordinates toward the center, so the draw stays
        // inside the seed point's kernel.
        std::vector<double> dir(static_cast<std::size_t>(dims_));
        double norm2 = 0.0;
        for (auto& d : dir) {
          d = rng_.normal();
          norm2 += d * d;
        }
        const double norm = std::sqrt(std::max(norm2, 1e-300));
        const double radius =
            std::pow(rng_.uniform01(), 1.0 / static_cast<double>(dims_));
        for (int j = 0; j < dims_; ++j) {
          const auto js = static_cast<std::size_t>(j);
          double v = seed_data_[idx].coords[js] +
                     semi_axes_[js] * radius * dir[js] / norm;
          p.coords[js] = std::clamp(v, lower_[js], upper_[js]);
        }
      }
      break;
    }
    case Kind::replay: {
      p = seed_data_[cursor_];
      cursor_ = (cursor_ + 1) % seed_data_.size();
      break;
    }
  }
  return p;
}

std::vector<ParameterPoint> draw(SyntheticSource& source, std::int64_t count) {
  if (count < 0) throw std::invalid_argument("draw: count must be >= 0");
  std::vector<ParameterPoint> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) out.push_back(source.draw_one());
  return out;
}

}  // namespace covplan
