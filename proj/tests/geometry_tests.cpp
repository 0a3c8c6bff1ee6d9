#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "covplan/geometry.hpp"
#include "covplan/rng.hpp"

using namespace covplan;

namespace {

ParameterPoint pt(std::initializer_list<double> coords) {
  return ParameterPoint(std::vector<double>(coords));
}

}  // namespace

TEST_CASE("single ellipse volume matches the analytic area") {
  const ParameterSpace space({-2.0, -2.0}, {2.0, 2.0});
  const SampleCloud cloud(space, 9001, 1u << 18);
  const std::vector<CoverageKernel> kernels{CoverageKernel(pt({0.0, 0.0}), {1.0, 1.0})};
  const VolumeEstimate est = union_volume(kernels, cloud);
  // Analytic area pi*p1*p2; allow 4 standard errors.
  CHECK(std::abs(est.volume - std::numbers::pi) <= 4.0 * est.std_error);
  CHECK(est.std_error < 0.02);
}

TEST_CASE("elliptic semi-axes scale the volume") {
  const ParameterSpace space({-3.0, -2.0}, {3.0, 2.0});
  const SampleCloud cloud(space, 7, 1u << 18);
  const std::vector<CoverageKernel> kernels{CoverageKernel(pt({0.0, 0.0}), {2.0, 0.5})};
  const VolumeEstimate est = union_volume(kernels, cloud);
  CHECK(std::abs(est.volume - std::numbers::pi) <= 4.0 * est.std_error);
}

TEST_CASE("two unit disks at distance 1 match the lens-derived union") {
  const ParameterSpace space({-2.0, -2.0}, {3.0, 2.0});
  const SampleCloud cloud(space, 1234, 1u << 18);
  const std::vector<CoverageKernel> kernels{CoverageKernel(pt({0.0, 0.0}), {1.0, 1.0}),
                                            CoverageKernel(pt({1.0, 0.0}), {1.0, 1.0})};
  const VolumeEstimate est = union_volume(kernels, cloud);
  const double lens = 2.0 * std::acos(0.5) - 0.5 * std::sqrt(3.0);
  const double expected = 2.0 * std::numbers::pi - lens;  // 5.05482...
  CHECK(std::abs(est.volume - expected) <= 4.0 * est.std_error);
}

TEST_CASE("duplicated kernels change nothing, exactly") {
  const ParameterSpace space({0.0, 0.0}, {10.0, 10.0});
  const SampleCloud cloud(space, 5, 1u << 14);
  std::vector<CoverageKernel> one{CoverageKernel(pt({4.0, 4.0}), {1.5, 1.0})};
  std::vector<CoverageKernel> two = one;
  two.push_back(one.front());
  CHECK(union_volume(one, cloud).volume == union_volume(two, cloud).volume);
}

TEST_CASE("supersets never lose volume") {
  const ParameterSpace space({0.0, 0.0}, {10.0, 10.0});
  const SampleCloud cloud(space, 99, 1u << 14);
  Xoshiro256pp rng(7);
  std::vector<CoverageKernel> kernels;
  double previous = 0.0;
  for (int i = 0; i < 20; ++i) {
    kernels.emplace_back(pt({rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0)}),
                         std::vector<double>{0.8, 0.8});
    const double volume = union_volume(kernels, cloud).volume;
    CHECK(volume >= previous);
    previous = volume;
  }
}

TEST_CASE("estimates are deterministic and thread-count invariant") {
  const ParameterSpace space({0.0, 0.0, 0.0}, {5.0, 5.0, 5.0});
  const SampleCloud cloud(space, 2024, 1u << 14);
  Xoshiro256pp rng(3);
  std::vector<CoverageKernel> kernels;
  for (int i = 0; i < 12; ++i)
    kernels.emplace_back(pt({rng.uniform(0.0, 5.0), rng.uniform(0.0, 5.0),
                             rng.uniform(0.0, 5.0)}),
                         std::vector<double>{0.7, 0.5, 0.9});
  const VolumeEstimate a = union_volume(kernels, cloud, 1);
  const VolumeEstimate b = union_volume(kernels, cloud, 4);
  CHECK(a.volume == b.volume);
  CHECK(a.covered == b.covered);

  const SampleCloud cloud2(space, 2024, 1u << 14);
  CHECK(union_volume(kernels, cloud2).volume == a.volume);
}

TEST_CASE("empty kernel list covers nothing") {
  const ParameterSpace space({0.0}, {1.0});
  const SampleCloud cloud(space, 1, 1024);
  CHECK(union_volume({}, cloud).volume == 0.0);
}

TEST_CASE("dimension mismatch is rejected") {
  const ParameterSpace space({0.0, 0.0}, {1.0, 1.0});
  const SampleCloud cloud(space, 1, 256);
  const std::vector<CoverageKernel> kernels{CoverageKernel(pt({0.5}), {0.1})};
  CHECK_THROWS_AS(union_volume(kernels, cloud), std::invalid_argument);
}

TEST_CASE("coverage curve equals from-scratch unions at every prefix") {
  const ParameterSpace space({0.0, 0.0}, {10.0, 10.0});
  SampleCloud cloud(space, 31, 1u << 14);
  Xoshiro256pp rng(11);
  std::vector<ParameterPoint> points;
  for (int i = 0; i < 1000; ++i)
    points.push_back(pt({rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0)}));
  const std::vector<double> axes{0.5, 0.5};

  const auto curve = coverage_curve(points, axes, cloud);
  REQUIRE(curve.size() == points.size());
  for (std::size_t count : {std::size_t{10}, std::size_t{100}, std::size_t{1000}}) {
    std::vector<CoverageKernel> prefix;
    for (std::size_t i = 0; i < count; ++i) prefix.emplace_back(points[i], axes);
    const SampleCloud fresh(space, 31, 1u << 14);
    CHECK(curve[count - 1].volume == union_volume(prefix, fresh).volume);
  }
  for (std::size_t i = 1; i < curve.size(); ++i)
    CHECK(curve[i].volume >= curve[i - 1].volume);
}

TEST_CASE("repeated points flatten the curve after the first entry") {
  const ParameterSpace space({0.0, 0.0}, {4.0, 4.0});
  SampleCloud cloud(space, 8, 4096);
  std::vector<ParameterPoint> points(7, pt({2.0, 2.0}));
  const std::vector<double> axes{0.5, 0.5};
  const auto curve = coverage_curve(points, axes, cloud);
  REQUIRE(curve.size() == 7);
  for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i].volume == curve[0].volume);
}

TEST_CASE("empty point list yields an empty curve") {
  const ParameterSpace space({0.0}, {1.0});
  SampleCloud cloud(space, 8, 256);
  const std::vector<ParameterPoint> none;
  const std::vector<double> axes{0.1};
  CHECK(coverage_curve(none, axes, cloud).empty());
}

TEST_CASE("reference volume: dilation widens membership") {
  const ParameterSpace space({-4.0, -4.0}, {4.0, 4.0});
  const std::vector<ParameterPoint> points{pt({0.0, 0.0})};
  const std::vector<double> axes{1.0, 1.0};
  const ReferenceVolume ref = build_reference_volume(points, axes, 2.0, space);
  CHECK(ref.contains(pt({1.5, 0.0})));   // (1.5/2)^2 = 0.5625 <= 1
  CHECK(!ref.contains(pt({2.5, 0.0})));  // beyond the dilated axis
  const ReferenceVolume raw = build_reference_volume(points, axes, 1.0, space);
  CHECK(!raw.contains(pt({1.5, 0.0})));
  CHECK(raw.contains(pt({1.0, 0.0})));  // boundary counts as covered
}

TEST_CASE("reference volume clips at the space box") {
  const ParameterSpace space({0.0, 0.0}, {2.0, 2.0});
  const std::vector<ParameterPoint> points{pt({0.0, 0.0})};
  const std::vector<double> axes{1.0, 1.0};
  const ReferenceVolume ref = build_reference_volume(points, axes, 1.5, space);
  CHECK(ref.contains(pt({0.5, 0.5})));
  CHECK(!ref.contains(pt({-0.5, 0.5})));  // inside the kernel, outside the box
}

TEST_CASE("thinning dilation is rejected") {
  const ParameterSpace space({0.0}, {1.0});
  const std::vector<ParameterPoint> points{pt({0.5})};
  const std::vector<double> axes{0.1};
  CHECK_THROWS_AS(build_reference_volume(points, axes, 0.5, space), std::invalid_argument);
}

TEST_CASE("grid-indexed membership agrees with the linear scan") {
  const ParameterSpace space({0.0, 0.0, 0.0}, {10.0, 6.0, 8.0});
  Xoshiro256pp rng(555);
  std::vector<ParameterPoint> points;
  for (int i = 0; i < 400; ++i)
    points.push_back(pt({rng.uniform(0.0, 10.0), rng.uniform(0.0, 6.0),
                         rng.uniform(0.0, 8.0)}));
  const std::vector<double> axes{0.6, 0.3, 0.5};
  const ReferenceVolume ref = build_reference_volume(points, axes, 1.4, space);

  int inside = 0;
  for (int q = 0; q < 10000; ++q) {
    // Stray slightly outside the box on purpose.
    const ParameterPoint query = pt({rng.uniform(-0.5, 10.5), rng.uniform(-0.5, 6.5),
                                     rng.uniform(-0.5, 8.5)});
    const bool fast = ref.contains(query);
    CHECK(fast == ref.contains_linear(query.coords));
    inside += fast ? 1 : 0;
  }
  CHECK(inside > 0);
  CHECK(inside < 10000);
}

TEST_CASE("kernel centers outside the box still contribute their clipped part") {
  const ParameterSpace space({0.0, 0.0}, {10.0, 10.0});
  const SampleCloud cloud(space, 77, 1u << 16);
  // Center sits on the corner; a quarter of the disk pokes into the box.
  const std::vector<CoverageKernel> kernels{CoverageKernel(pt({0.0, 0.0}), {2.0, 2.0})};
  const VolumeEstimate est = union_volume(kernels, cloud);
  const double quarter = std::numbers::pi * 4.0 / 4.0;
  CHECK(std::abs(est.volume - quarter) <= 4.0 * est.std_error);
}

TEST_CASE("sample cloud is reproducible and fills the box") {
  const ParameterSpace space({-1.0, 2.0}, {1.0, 5.0});
  const SampleCloud a(space, 12, 4096);
  const SampleCloud b(space, 12, 4096);
  const SampleCloud c(space, 13, 4096);
  REQUIRE(a.size() == 4096);
  double mean0 = 0.0;
  bool different_seed_differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto xa = a.point(i);
    const auto xb = b.point(i);
    CHECK(xa[0] == xb[0]);
    CHECK(xa[1] == xb[1]);
    CHECK(space.contains(xa));
    different_seed_differs = different_seed_differs || xa[0] != c.point(i)[0];
    mean0 += xa[0];
  }
  CHECK(different_seed_differs);
  CHECK(std::abs(mean0 / 4096.0) < 0.05);  // mean of U(-1,1), well within noise
}

TEST_CASE("ellipsoid volumes match closed forms") {
  CHECK(ellipsoid_volume(std::vector<double>{1.0, 1.0}) ==
        doctest::Approx(std::numbers::pi).epsilon(1e-12));
  CHECK(ellipsoid_volume(std::vector<double>{1.0, 1.0, 1.0}) ==
        doctest::Approx(4.0 / 3.0 * std::numbers::pi).epsilon(1e-12));
  CHECK(ellipsoid_volume(std::vector<double>{2.0, 0.5}) ==
        doctest::Approx(std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("parameter space validates its bounds") {
  CHECK_THROWS_AS(ParameterSpace({0.0}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(ParameterSpace({1.0}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(ParameterSpace({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(CoverageKernel(ParameterPoint({0.0}), {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(CoverageKernel(ParameterPoint({0.0}), {-1.0}), std::invalid_argument);
}
