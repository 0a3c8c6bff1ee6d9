#include "covplan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "covplan/parallel.hpp"
#include "covplan/rng.hpp"

namespace covplan {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

// Cells per dimension from a target cell edge per dimension, capped per dim
// and in total. Deterministic in its inputs.
std::vector<std::int64_t> grid_cells(const ParameterSpace& space,
                                     std::span<const double> target_edge,
                                     std::int64_t per_dim_cap, std::size_t max_cells) {
  const int m = space.dims();
  std::vector<std::int64_t> cells(static_cast<std::size_t>(m), 1);
  for (int j = 0; j < m; ++j) {
    const double edge = target_edge[static_cast<std::size_t>(j)];
    std::int64_t c = 1;
    if (std::isfinite(edge) && edge > 0.0)
      c = static_cast<std::int64_t>(space.extent(j) / edge);
    cells[static_cast<std::size_t>(j)] = std::clamp<std::int64_t>(c, 1, per_dim_cap);
  }
  auto total = [&] {
    double t = 1.0;
    for (auto c : cells) t *= static_cast<double>(c);
    return t;
  };
  while (total() > static_cast<double>(max_cells)) {
    auto it = std::max_element(cells.begin(), cells.end());
    if (*it <= 1) break;
    *it /= 2;
  }
  return cells;
}

std::vector<std::int64_t> row_major_strides(const std::vector<std::int64_t>& cells) {
  std::vector<std::int64_t> strides(cells.size(), 1);
  for (std::size_t j = 1; j < cells.size(); ++j)
    strides[j] = strides[j - 1] * cells[j - 1];
  return strides;
}

}  // namespace

ParameterSpace::ParameterSpace(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  require(!lower_.empty(), "ParameterSpace: at least one dimension required");
  require(lower_.size() == upper_.size(), "ParameterSpace: lower/upper size mismatch");
  require(all_finite(lower_) && all_finite(upper_), "ParameterSpace: bounds must be finite");
  for (std::size_t j = 0; j < lower_.size(); ++j)
    require(lower_[j] < upper_[j], "ParameterSpace: lower must be strictly below upper");
}

double ParameterSpace::box_volume() const {
  double v = 1.0;
  for (int j = 0; j < dims(); ++j) v *= extent(j);
  return v;
}

bool ParameterSpace::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dims()) return false;
  for (int j = 0; j < dims(); ++j) {
    const auto js = static_cast<std::size_t>(j);
    if (x[js] < lower_[js] || x[js] > upper_[js]) return false;
  }
  return true;
}

CoverageKernel::CoverageKernel(ParameterPoint c, std::vector<double> axes)
    : center(std::move(c)), semi_axes(std::move(axes)) {
  require(center.dims() > 0, "CoverageKernel: empty center");
  require(center.dims() == static_cast<int>(semi_axes.size()),
          "CoverageKernel: center/semi_axes dimension mismatch");
  require(all_finite(center.coords), "CoverageKernel: center must be finite");
  for (double p : semi_axes)
    require(std::isfinite(p) && p > 0.0, "CoverageKernel: semi-axes must be positive");
}

bool CoverageKernel::contains(std::span<const double> x) const {
  require(static_cast<int>(x.size()) == dims(), "CoverageKernel: query dimension mismatch");
  double s = 0.0;
  for (int j = 0; j < dims(); ++j) {
    const auto js = static_cast<std::size_t>(j);
    const double d = (x[js] - center.coords[js]) / semi_axes[js];
    s += d * d;
  }
  return s <= 1.0;
}

KernelSet::KernelSet(int dims) : dims_(dims) {
  require(dims > 0, "KernelSet: dims must be positive");
}

KernelSet KernelSet::from_kernels(std::span<const CoverageKernel> kernels, double scale) {
  require(!kernels.empty(), "KernelSet: empty kernel list");
  KernelSet set(kernels[0].dims());
  for (const auto& k : kernels) set.add(k.center.coords, k.semi_axes, scale);
  return set;
}

KernelSet KernelSet::from_points(std::span<const ParameterPoint> centers,
                                 std::span<const double> semi_axes, double scale) {
  require(!centers.empty(), "KernelSet: empty center list");
  KernelSet set(static_cast<int>(semi_axes.size()));
  for (const auto& c : centers) set.add(c.coords, semi_axes, scale);
  return set;
}

void KernelSet::add(std::span<const double> center, std::span<const double> semi_axes,
                    double scale) {
  require(static_cast<int>(center.size()) == dims_ &&
              static_cast<int>(semi_axes.size()) == dims_,
          "KernelSet: dimension mismatch");
  require(std::isfinite(scale) && scale > 0.0, "KernelSet: scale must be positive");
  require(all_finite(center), "KernelSet: center must be finite");
  for (int j = 0; j < dims_; ++j) {
    const auto js = static_cast<std::size_t>(j);
    require(std::isfinite(semi_axes[js]) && semi_axes[js] > 0.0,
            "KernelSet: semi-axes must be positive");
    const double scaled = semi_axes[js] * scale;
    centers_.push_back(center[js]);
    axes_.push_back(scaled);
    inv_axes_.push_back(1.0 / scaled);
  }
  ++count_;
}

std::vector<double> KernelSet::mean_axes() const {
  std::vector<double> mean(static_cast<std::size_t>(dims_), 0.0);
  if (count_ == 0) return mean;
  for (std::size_t k = 0; k < count_; ++k)
    for (int j = 0; j < dims_; ++j)
      mean[static_cast<std::size_t>(j)] += axes_[k * static_cast<std::size_t>(dims_) +
                                                 static_cast<std::size_t>(j)];
  for (auto& v : mean) v /= static_cast<double>(count_);
  return mean;
}

KernelIndex::KernelIndex(const ParameterSpace& space, const KernelSet& kernels,
                         std::size_t max_cells) {
  const int m = space.dims();
  require(kernels.dims() == m, "KernelIndex: kernel/space dimension mismatch");
  lower_ = space.lower();

  // Cell edge ~ mean kernel semi-axis: a kernel box then spans ~3 cells/dim.
  std::vector<double> mean = kernels.mean_axes();
  cells_ = grid_cells(space, mean, 256, max_cells);
  strides_ = row_major_strides(cells_);
  inv_width_.resize(static_cast<std::size_t>(m));
  std::size_t total = 1;
  for (int j = 0; j < m; ++j) {
    const auto js = static_cast<std::size_t>(j);
    inv_width_[js] = static_cast<double>(cells_[js]) / space.extent(j);
    total *= static_cast<std::size_t>(cells_[js]);
  }

  // Two passes: count entries per cell, then fill.
  std::vector<std::size_t> counts(total + 1, 0);
  std::vector<std::int64_t> lo_idx(static_cast<std::size_t>(m)),
      hi_idx(static_cast<std::size_t>(m)), cur(static_cast<std::size_t>(m));

  auto cell_range = [&](std::size_t k) -> bool {
    const auto center = kernels.center(k);
    const auto axes = kernels.axes(k);
    for (int j = 0; j < m; ++j) {
      const auto js = static_cast<std::size_t>(j);
      const double lo = center[js] - axes[js];
      const double hi = center[js] + axes[js];
      if (hi < space.lower(j) || lo > space.upper(j)) return false;  // fully outside
      auto clampc = [&](double v) {
        auto c = static_cast<std::int64_t>((v - lower_[js]) * inv_width_[js]);
        return std::clamp<std::int64_t>(c, 0, cells_[js] - 1);
      };
      lo_idx[js] = clampc(lo);
      hi_idx[js] = clampc(hi);
    }
    return true;
  };

  auto for_cells = [&](auto&& fn) {
    cur = lo_idx;
    for (;;) {
      std::size_t cell = 0;
      for (int j = 0; j < m; ++j)
        cell += static_cast<std::size_t>(cur[static_cast<std::size_t>(j)] *
                                         strides_[static_cast<std::size_t>(j)]);
      fn(cell);
      int j = 0;
      for (; j < m; ++j) {
        auto js = static_cast<std::size_t>(j);
        if (++cur[js] <= hi_idx[js]) break;
        cur[js] = lo_idx[js];
      }
      if (j == m) break;
    }
  };

  for (std::size_t k = 0; k < kernels.size(); ++k)
    if (cell_range(k)) for_cells([&](std::size_t cell) { ++counts[cell + 1]; });

  offsets_.assign(total + 1, 0);
  for (std::size_t i = 1; i <= total; ++i) offsets_[i] = offsets_[i - 1] + counts[i];
  entries_.resize(offsets_[total]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t k = 0; k < kernels.size(); ++k)
    if (cell_range(k))
      for_cells([&](std::size_t cell) {
        entries_[fill[cell]++] = static_cast<std::uint32_t>(k);
      });
}

std::size_t KernelIndex::cell_of(std::span<const double> x) const {
  std::size_t cell = 0;
  for (std::size_t j = 0; j < lower_.size(); ++j) {
    auto c = static_cast<std::int64_t>((x[j] - lower_[j]) * inv_width_[j]);
    c = std::clamp<std::int64_t>(c, 0, cells_[j] - 1);
    cell += static_cast<std::size_t>(c * strides_[j]);
  }
  return cell;
}

std::span<const std::uint32_t> KernelIndex::candidates(std::span<const double> x) const {
  const std::size_t cell = cell_of(x);
  return {entries_.data() + offsets_[cell], offsets_[cell + 1] - offsets_[cell]};
}

bool KernelIndex::covered(const KernelSet& kernels, std::span<const double> x) const {
  for (std::uint32_t id : candidates(x))
    if (kernels.contains(id, x)) return true;
  return false;
}

CloudIndex::CloudIndex(const SampleCloud& cloud, std::span<const double> cell_hint,
                       std::size_t max_cells)
    : dims_(cloud.dims()) {
  const ParameterSpace& space = cloud.space();
  require(static_cast<int>(cell_hint.size()) == dims_,
          "CloudIndex: cell hint dimension mismatch");
  lower_ = space.lower();
  upper_ = space.upper();
  cells_ = grid_cells(space, cell_hint, 512, max_cells);
  strides_ = row_major_strides(cells_);
  inv_width_.resize(static_cast<std::size_t>(dims_));
  width_.resize(static_cast<std::size_t>(dims_));
  std::size_t total = 1;
  for (int j = 0; j < dims_; ++j) {
    const auto js = static_cast<std::size_t>(j);
    inv_width_[js] = static_cast<double>(cells_[js]) / space.extent(j);
    width_[js] = space.extent(j) / static_cast<double>(cells_[js]);
    total *= static_cast<std::size_t>(cells_[js]);
  }

  const std::size_t n = cloud.size();
  std::vector<std::size_t> cell_of(n);
  std::vector<std::size_t> counts(total + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = cloud.point(i);
    std::size_t cell = 0;
    for (int j = 0; j < dims_; ++j) {
      const auto js = static_cast<std::size_t>(j);
      auto c = static_cast<std::int64_t>((x[js] - lower_[js]) * inv_width_[js]);
      c = std::clamp<std::int64_t>(c, 0, cells_[js] - 1);
      cell += static_cast<std::size_t>(c * strides_[js]);
    }
    cell_of[i] = cell;
    ++counts[cell + 1];
  }
  offsets_.assign(total + 1, 0);
  for (std::size_t i = 1; i <= total; ++i) offsets_[i] = offsets_[i - 1] + counts[i];
  entries_.resize(n);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < n; ++i) entries_[fill[cell_of[i]]++] = static_cast<std::uint32_t>(i);
}

SampleCloud::SampleCloud(const ParameterSpace& space, std::uint64_t seed, std::size_t count)
    : space_(space), seed_(seed), count_(count) {
  require(count >= 1, "SampleCloud: at least one sample required");
  const int m = space.dims();
  auto pts = std::make_shared<std::vector<double>>();
  pts->resize(count * static_cast<std::size_t>(m));
  Xoshiro256pp rng(seed);
  // Fill order is pinned: point-major, dimension-minor.
  double* out = pts->data();
  for (std::size_t i = 0; i < count; ++i)
    for (int j = 0; j < m; ++j)
      *out++ = space.lower(j) + rng.uniform01() * space.extent(j);
  points_ = std::move(pts);
  flags_.assign(count, 0);
}

void SampleCloud::reset_coverage() {
  std::fill(flags_.begin(), flags_.end(), 0);
  covered_count_ = 0;
}

std::size_t SampleCloud::mark(std::span<const double> center,
                              std::span<const double> semi_axes, const CloudIndex& index) {
  const int m = dims();
  require(static_cast<int>(center.size()) == m && static_cast<int>(semi_axes.size()) == m,
          "SampleCloud::mark: dimension mismatch");
  std::vector<double> lo(static_cast<std::size_t>(m)), hi(static_cast<std::size_t>(m)),
      inv(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const auto js = static_cast<std::size_t>(j);
    lo[js] = center[js] - semi_axes[js];
    hi[js] = center[js] + semi_axes[js];
    inv[js] = 1.0 / semi_axes[js];
  }
  std::size_t newly = 0;
  const double* pts = points_->data();
  index.visit_box(lo, hi, [&](std::uint32_t id) {
    if (flags_[id]) return;
    const double* x = pts + static_cast<std::size_t>(id) * static_cast<std::size_t>(m);
    double s = 0.0;
    for (int j = 0; j < m; ++j) {
      const auto js = static_cast<std::size_t>(j);
      const double d = (x[js] - center[js]) * inv[js];
      s += d * d;
    }
    if (s <= 1.0) {
      flags_[id] = 1;
      ++newly;
    }
  });
  covered_count_ += newly;
  return newly;
}

VolumeEstimate union_volume(std::span<const CoverageKernel> kernels,
                            const SampleCloud& cloud, unsigned threads) {
  VolumeEstimate est;
  est.samples = cloud.size();
  if (kernels.empty()) return est;
  for (const auto& k : kernels)
    if (k.dims() != cloud.dims())
      throw std::invalid_argument("union_volume: kernel/cloud dimension mismatch");

  const KernelSet set = KernelSet::from_kernels(kernels);
  const KernelIndex index(cloud.space(), set);

  const unsigned workers = std::max(1u, threads);
  std::vector<std::size_t> chunk_hits(workers, 0);
  parallel_chunks(cloud.size(), workers, [&](std::size_t c, std::size_t begin, std::size_t end) {
    std::size_t hits = 0;
    for (std::size_t i = begin; i < end; ++i)
      if (index.covered(set, cloud.point(i))) ++hits;
    chunk_hits[c] = hits;
  });
  std::size_t covered = 0;
  for (auto h : chunk_hits) covered += h;

  const double n = static_cast<double>(cloud.size());
  const double p = static_cast<double>(covered) / n;
  const double box = cloud.space().box_volume();
  est.volume = box * p;
  est.std_error = box * std::sqrt(p * (1.0 - p) / n);
  est.covered = covered;
  return est;
}

std::vector<CurvePoint> coverage_curve(std::span<const ParameterPoint> points,
                                       std::span<const double> semi_axes,
                                       SampleCloud& cloud) {
  const int m = cloud.dims();
  if (static_cast<int>(semi_axes.size()) != m)
    throw std::invalid_argument("coverage_curve: semi_axes dimension mismatch");
  for (double p : semi_axes)
    if (!std::isfinite(p) || p <= 0.0)
      throw std::invalid_argument("coverage_curve: semi-axes must be positive");
  for (const auto& p : points)
    if (p.dims() != m)
      throw std::invalid_argument("coverage_curve: point dimension mismatch");

  cloud.reset_coverage();
  std::vector<CurvePoint> curve;
  if (points.empty()) return curve;
  curve.reserve(points.size());

  const CloudIndex index(cloud, semi_axes);
  const double box = cloud.space().box_volume();
  const double n = static_cast<double>(cloud.size());
  std::size_t cum = 0;
  std::int64_t count = 0;
  for (const auto& p : points) {
    cum += cloud.mark(p.coords, semi_axes, index);
    curve.push_back({++count, box * static_cast<double>(cum) / n});
  }
  return curve;
}

ReferenceVolume::ReferenceVolume(const ParameterSpace& space, KernelSet kernels,
                                 double dilation)
    : space_(space),
      dilation_(dilation),
      kernels_(std::move(kernels)),
      index_(space_, kernels_) {
  if (!(std::isfinite(dilation) && dilation >= 1.0))
    throw std::invalid_argument("ReferenceVolume: dilation must be >= 1");
  if (kernels_.dims() != space_.dims())
    throw std::invalid_argument("ReferenceVolume: kernel/space dimension mismatch");
}

bool ReferenceVolume::contains(std::span<const double> x) const {
  if (!space_.contains(x)) return false;  // clipped at the box
  return index_.covered(kernels_, x);
}

bool ReferenceVolume::contains_linear(std::span<const double> x) const {
  if (!space_.contains(x)) return false;
  for (std::size_t k = 0; k < kernels_.size(); ++k)
    if (kernels_.contains(k, x)) return true;
  return false;
}

ReferenceVolume build_reference_volume(std::span<const ParameterPoint> valid_points,
                                       std::span<const double> semi_axes,
                                       double dilation, const ParameterSpace& space) {
  if (valid_points.empty())
    throw std::invalid_argument("build_reference_volume: no valid points");
  if (!(std::isfinite(dilation) && dilation >= 1.0))
    throw std::invalid_argument("build_reference_volume: dilation must be >= 1");
  if (static_cast<int>(semi_axes.size()) != space.dims())
    throw std::invalid_argument("build_reference_volume: semi_axes dimension mismatch");
  KernelSet set = KernelSet::from_points(valid_points, semi_axes, dilation);
  return ReferenceVolume(space, std::move(set), dilation);
}

double ellipsoid_volume(std::span<const double> semi_axes) {
  const auto m = semi_axes.size();
  if (m == 0) throw std::invalid_argument("ellipsoid_volume: empty semi_axes");
  double v = std::pow(3.14159265358979323846, static_cast<double>(m) / 2.0) /
             std::tgamma(static_cast<double>(m) / 2.0 + 1.0);
  for (double p : semi_axes) {
    if (!(std::isfinite(p) && p > 0.0))
      throw std::invalid_argument("ellipsoid_volume: semi-axes must be positive");
    v *= p;
  }
  return v;
}

}  // namespace covplan
