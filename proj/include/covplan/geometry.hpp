#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace covplan {

// Axis-aligned box of admissible parameter values.
class ParameterSpace {
 public:
  ParameterSpace(std::vector<double> lower, std::vector<double> upper);

  int dims() const { return static_cast<int>(lower_.size()); }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  double lower(int j) const { return lower_[static_cast<std::size_t>(j)]; }
  double upper(int j) const { return upper_[static_cast<std::size_t>(j)]; }
  double extent(int j) const { return upper(j) - lower(j); }
  double box_volume() const;
  bool contains(std::span<const double> x) const;

 private:
  std::vector<double> lower_, upper_;
};

struct ParameterPoint {
  std::vector<double> coords;

  ParameterPoint() = default;
  explicit ParameterPoint(std::vector<double> c) : coords(std::move(c)) {}
  int dims() const { return static_cast<int>(coords.size()); }
};

// Axis-aligned ellipsoid around a point: x is inside iff
// sum_j ((x_j - center_j) / semi_axes_j)^2 <= 1. Boundary counts as inside.
struct CoverageKernel {
  ParameterPoint center;
  std::vector<double> semi_axes;

  CoverageKernel(ParameterPoint center, std::vector<double> semi_axes);
  int dims() const { return center.dims(); }
  bool contains(std::span<const double> x) const;
};

// Flat storage for a batch of (optionally scaled) ellipsoids. All membership
// tests in the project funnel through KernelSet::contains so the boundary
// arithmetic is identical on every code path.
class KernelSet {
 public:
  explicit KernelSet(int dims);

  static KernelSet from_kernels(std::span<const CoverageKernel> kernels, double scale = 1.0);
  static KernelSet from_points(std::span<const ParameterPoint> centers,
                               std::span<const double> semi_axes, double scale = 1.0);

  void add(std::span<const double> center, std::span<const double> semi_axes, double scale);

  int dims() const { return dims_; }
  std::size_t size() const { return count_; }

  std::span<const double> center(std::size_t k) const {
    return {centers_.data() + k * dims_, static_cast<std::size_t>(dims_)};
  }
  std::span<const double> axes(std::size_t k) const {
    return {axes_.data() + k * dims_, static_cast<std::size_t>(dims_)};
  }

  bool contains(std::size_t k, std::span<const double> x) const {
    const double* c = centers_.data() + k * dims_;
    const double* inv = inv_axes_.data() + k * dims_;
    double s = 0.0;
    for (int j = 0; j < dims_; ++j) {
      const double d = (x[static_cast<std::size_t>(j)] - c[j]) * inv[j];
      s += d * d;
    }
    return s <= 1.0;
  }

  // Mean scaled semi-axis per dimension; cell sizing heuristic input.
  std::vector<double> mean_axes() const;

 private:
  int dims_;
  std::size_t count_ = 0;
  std::vector<double> centers_, axes_, inv_axes_;
};

// Uniform grid over the space box bucketing kernel ids by bounding box.
// Point queries test only kernels whose boxes overlap the query cell, which
// keeps membership sublinear in kernel count for non-degenerate inputs.
class KernelIndex {
 public:
  KernelIndex(const ParameterSpace& space, const KernelSet& kernels,
              std::size_t max_cells = std::size_t{1} << 20);

  // x must lie inside the space box.
  std::span<const std::uint32_t> candidates(std::span<const double> x) const;
  bool covered(const KernelSet& kernels, std::span<const double> x) const;

 private:
  std::size_t cell_of(std::span<const double> x) const;

  std::vector<double> lower_, inv_width_;
  std::vector<std::int64_t> cells_, strides_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> entries_;
};

// Uniform grid bucketing cloud point ids by cell; used for incremental
// kernel-major coverage marking.
class SampleCloud;
class CloudIndex {
 public:
  CloudIndex(const SampleCloud& cloud, std::span<const double> cell_hint,
             std::size_t max_cells = std::size_t{1} << 21);

  // Iterate ids of points whose cell intersects [lo, hi] (clipped to the box).
  template <class Fn>
  void visit_box(std::span<const double> lo, std::span<const double> hi, Fn&& fn) const;

 private:
  std::vector<double> lower_, upper_, inv_width_, width_;
  std::vector<std::int64_t> cells_, strides_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> entries_;
  int dims_;
};

// N points drawn uniformly over the space box, plus per-point covered flags.
// Points are immutable and shared between copies; flags are per instance, so
// cheap copies give independent coverage evaluations over the same cloud.
class SampleCloud {
 public:
  SampleCloud(const ParameterSpace& space, std::uint64_t seed, std::size_t count);

  const ParameterSpace& space() const { return space_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t size() const { return count_; }
  int dims() const { return space_.dims(); }

  std::span<const double> point(std::size_t i) const {
    return {points_->data() + i * static_cast<std::size_t>(dims()),
            static_cast<std::size_t>(dims())};
  }

  void reset_coverage();
  std::size_t covered_count() const { return covered_count_; }
  bool covered(std::size_t i) const { return flags_[i] != 0; }

  // Marks all still-uncovered points inside the kernel (center, semi_axes);
  // returns how many flags flipped. Flags are monotone: marking never unsets.
  std::size_t mark(std::span<const double> center, std::span<const double> semi_axes,
                   const CloudIndex& index);

 private:
  ParameterSpace space_;
  std::uint64_t seed_;
  std::size_t count_;
  std::shared_ptr<const std::vector<double>> points_;  // row-major
  std::vector<std::uint8_t> flags_;
  std::size_t covered_count_ = 0;
};

struct VolumeEstimate {
  double volume = 0.0;
  double std_error = 0.0;
  std::size_t covered = 0;
  std::size_t samples = 0;
};

// Monte Carlo volume of the union of the kernels, clipped to the cloud's
// space box. Exact 0 for an empty kernel list. Deterministic for a fixed
// cloud regardless of `threads`.
VolumeEstimate union_volume(std::span<const CoverageKernel> kernels,
                            const SampleCloud& cloud, unsigned threads = 1);

struct CurvePoint {
  std::int64_t count = 0;
  double volume = 0.0;
};

// Cumulative union volume after each point's kernel is added, in input
// order. Resets the cloud's flags, then marks incrementally; the final curve
// value equals union_volume of all points exactly.
std::vector<CurvePoint> coverage_curve(std::span<const ParameterPoint> points,
                                       std::span<const double> semi_axes,
                                       SampleCloud& cloud);

// Union of dilation-scaled kernels around trusted points, clipped to the
// space box. Membership is the validity test for generated scenarios.
class ReferenceVolume {
 public:
  ReferenceVolume(const ParameterSpace& space, KernelSet kernels, double dilation);

  const ParameterSpace& space() const { return space_; }
  double dilation() const { return dilation_; }
  std::size_t kernel_count() const { return kernels_.size(); }

  bool contains(std::span<const double> x) const;
  bool contains(const ParameterPoint& p) const {
    return contains(std::span<const double>(p.coords));
  }

  // Linear scan over all kernels; the grid-free reference used by tests.
  bool contains_linear(std::span<const double> x) const;

 private:
  ParameterSpace space_;
  double dilation_;
  KernelSet kernels_;
  KernelIndex index_;
};

ReferenceVolume build_reference_volume(std::span<const ParameterPoint> valid_points,
                                       std::span<const double> semi_axes,
                                       double dilation, const ParameterSpace& space);

// Analytic volume of one axis-aligned ellipsoid (no box clipping).
double ellipsoid_volume(std::span<const double> semi_axes);

// --- template implementation ---

template <class Fn>
void CloudIndex::visit_box(std::span<const double> lo, std::span<const double> hi,
                           Fn&& fn) const {
  const int m = dims_;
  std::vector<std::int64_t> lo_idx(static_cast<std::size_t>(m)),
      hi_idx(static_cast<std::size_t>(m)), cur(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const auto js = static_cast<std::size_t>(j);
    if (hi[js] < lower_[js] || lo[js] > upper_[js]) return;
    auto clampc = [&](double v) {
      auto c = static_cast<std::int64_t>((v - lower_[js]) * inv_width_[js]);
      if (c < 0) c = 0;
      if (c >= cells_[js]) c = cells_[js] - 1;
      return c;
    };
    lo_idx[js] = clampc(lo[js]);
    hi_idx[js] = clampc(hi[js]);
    cur[js] = lo_idx[js];
  }
  for (;;) {
    std::size_t cell = 0;
    for (int j = 0; j < m; ++j)
      cell += static_cast<std::size_t>(cur[static_cast<std::size_t>(j)] *
                                       strides_[static_cast<std::size_t>(j)]);
    for (std::size_t e = offsets_[cell]; e < offsets_[cell + 1]; ++e) fn(entries_[e]);
    int j = 0;
    for (; j < m; ++j) {
      auto js = static_cast<std::size_t>(j);
      if (++cur[js] <= hi_idx[js]) break;
      cur[js] = lo_idx[js];
    }
    if (j == m) break;
  }
}

}  // namespace covplan
