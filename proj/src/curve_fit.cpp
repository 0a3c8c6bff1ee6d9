#include "covplan/curve_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "covplan/errors.hpp"
#include "covplan/parallel.hpp"
#include "covplan/rng.hpp"

namespace covplan {

namespace {

void validate_model(const WeibullCoverageModel& m) {
  if (!(std::isfinite(m.a) && m.a > 0.0) || !(std::isfinite(m.b) && m.b > 0.0) ||
      !(std::isfinite(m.c) && m.c > 0.0) || !(std::isfinite(m.v_pre) && m.v_pre >= 0.0))
    throw std::invalid_argument("WeibullCoverageModel: requires a, b, c > 0 and v_pre >= 0");
}

// theta = (ln a, ln b, ln c); clamping in log space keeps parameters positive
// and inside the FitOptions box.
struct LogBounds {
  double lo[3], hi[3];
  explicit LogBounds(const FitOptions& o) {
    lo[0] = std::log(o.a_min), hi[0] = std::log(o.a_max);
    lo[1] = std::log(o.b_min), hi[1] = std::log(o.b_max);
    lo[2] = std::log(o.c_min), hi[2] = std::log(o.c_max);
  }
  void clamp(double* th) const {
    for (int j = 0; j < 3; ++j) th[j] = std::clamp(th[j], lo[j], hi[j]);
  }
};

struct Eval {
  double rss = std::numeric_limits<double>::infinity();
  double jtj[3][3] = {};
  double jtr[3] = {};
};

// Residuals and normal equations for theta against (x, y) with fixed v_pre.
Eval evaluate(const double* th, std::span<const double> lx, std::span<const double> y,
              double v_pre, bool with_jacobian) {
  Eval ev;
  const double a = std::exp(th[0]), b = std::exp(th[1]), c = std::exp(th[2]);
  double rss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double t = std::exp(c * lx[i]);  // x^c
    const double bt = b * t;
    double g, eb;
    if (bt > 700.0) {  // exp(-bt) underflows; avoid 0 * inf in the jacobian
      g = 1.0;
      eb = 0.0;
    } else {
      eb = std::exp(-bt);
      g = -std::expm1(-bt);
    }
    const double f = a * g + v_pre;
    const double r = y[i] - f;
    rss += r * r;
    if (with_jacobian) {
      const double ja = a * g;                 // d f / d ln a
      const double jb = a * eb * bt;           // d f / d ln b
      const double jc = jb * c * lx[i];        // d f / d ln c
      const double j[3] = {ja, jb, jc};
      for (int p = 0; p < 3; ++p) {
        ev.jtr[p] += j[p] * r;
        for (int q = p; q < 3; ++q) ev.jtj[p][q] += j[p] * j[q];
      }
    }
  }
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < p; ++q) ev.jtj[p][q] = ev.jtj[q][p];
  ev.rss = rss;
  return ev;
}

// Gaussian elimination with partial pivoting on a 3x3 system.
bool solve3(double m[3][3], const double* rhs, double* out) {
  double a[3][4];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) a[i][j] = m[i][j];
    a[i][3] = rhs[i];
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    if (std::fabs(a[piv][col]) < 1e-300) return false;
    if (piv != col)
      for (int j = col; j < 4; ++j) std::swap(a[piv][j], a[col][j]);
    for (int r = col + 1; r < 3; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int j = col; j < 4; ++j) a[r][j] -= f * a[col][j];
    }
  }
  for (int i = 2; i >= 0; --i) {
    double s = a[i][3];
    for (int j = i + 1; j < 3; ++j) s -= a[i][j] * out[j];
    out[i] = s / a[i][i];
  }
  return std::isfinite(out[0]) && std::isfinite(out[1]) && std::isfinite(out[2]);
}

// Levenberg-Marquardt from one start; returns final theta and RSS.
double run_start(double* th, std::span<const double> lx, std::span<const double> y,
                 double v_pre, const FitOptions& opt, const LogBounds& bounds) {
  Eval cur = evaluate(th, lx, y, v_pre, true);
  double mu = 1e-3;
  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    bool stepped = false;
    double next_th[3];
    for (int tries = 0; tries < 40; ++tries) {
      double damped[3][3];
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q)
          damped[p][q] = cur.jtj[p][q] + (p == q ? mu * (cur.jtj[p][p] + 1e-12) : 0.0);
      double delta[3];
      if (solve3(damped, cur.jtr, delta)) {
        for (int j = 0; j < 3; ++j) next_th[j] = th[j] + delta[j];
        bounds.clamp(next_th);
        const Eval trial = evaluate(next_th, lx, y, v_pre, true);
        if (trial.rss < cur.rss) {
          double max_rel = 0.0;
          for (int j = 0; j < 3; ++j)
            max_rel = std::max(max_rel,
                               std::fabs(next_th[j] - th[j]) / (1.0 + std::fabs(th[j])));
          for (int j = 0; j < 3; ++j) th[j] = next_th[j];
          cur = trial;
          mu = std::max(mu / 3.0, 1e-12);
          stepped = true;
          if (max_rel < opt.rel_tolerance) return cur.rss;
          break;
        }
      }
      mu *= 3.0;
      if (mu > 1e14) return cur.rss;  // stuck at a boundary or flat spot
    }
    if (!stepped) return cur.rss;
  }
  return cur.rss;
}

struct CurveArrays {
  std::vector<double> lx, y;
  double max_v = 0.0, min_v = 0.0;
};

CurveArrays check_curve(std::span<const CurvePoint> curve, double v_pre,
                        const FitOptions& opt) {
  if (!(std::isfinite(v_pre) && v_pre >= 0.0))
    throw std::invalid_argument("fit_weibull: v_pre must be finite and >= 0");
  if (curve.size() < 8) throw DataError("fit_weibull: fewer than 8 curve points");

  CurveArrays arr;
  arr.lx.reserve(curve.size());
  arr.y.reserve(curve.size());
  arr.max_v = -std::numeric_limits<double>::infinity();
  arr.min_v = std::numeric_limits<double>::infinity();
  std::int64_t prev_count = 0;
  double prev_v = -std::numeric_limits<double>::infinity();
  const double scale = [&] {
    double m = 1.0;
    for (const auto& p : curve) m = std::max(m, std::fabs(p.volume));
    return m;
  }();
  const double slack = 1e-9 * scale;
  for (const auto& p : curve) {
    if (p.count < 1) throw std::invalid_argument("fit_weibull: counts must be >= 1");
    if (p.count <= prev_count)
      throw std::invalid_argument("fit_weibull: counts must be strictly increasing");
    if (!std::isfinite(p.volume))
      throw std::invalid_argument("fit_weibull: volumes must be finite");
    if (p.volume < v_pre - slack)
      throw std::invalid_argument("fit_weibull: volume below v_pre");
    if (opt.require_monotone && p.volume < prev_v - slack)
      throw std::invalid_argument("fit_weibull: non-monotone volume curve");
    prev_count = p.count;
    prev_v = p.volume;
    arr.lx.push_back(std::log(static_cast<double>(p.count)));
    arr.y.push_back(p.volume);
    arr.max_v = std::max(arr.max_v, p.volume);
    arr.min_v = std::min(arr.min_v, p.volume);
  }
  if (arr.max_v - arr.min_v <= slack || arr.max_v - v_pre <= slack)
    throw DataError("fit_weibull: insufficient signal (flat coverage curve)");
  return arr;
}

}  // namespace

double WeibullCoverageModel::value(double x) const {
  if (!(x >= 0.0)) throw std::domain_error("WeibullCoverageModel::value: x must be >= 0");
  const double bt = b * std::pow(x, c);
  return a * -std::expm1(-bt) + v_pre;
}

WeibullCoverageModel fit_weibull(std::span<const CurvePoint> curve, double v_pre,
                                 const FitOptions& options) {
  const CurveArrays arr = check_curve(curve, v_pre, options);
  const LogBounds bounds(options);

  const double amp = std::clamp(arr.max_v - v_pre, options.a_min, options.a_max);
  const double a_starts[2] = {amp, 1.5 * amp};

  double best_rss = std::numeric_limits<double>::infinity();
  double best_th[3] = {0, 0, 0};
  bool have_best = false;
  for (double a0 : a_starts)
    for (double b0 : options.b_starts)
      for (double c0 : options.c_starts) {
        double th[3] = {std::log(a0), std::log(b0), std::log(c0)};
        bounds.clamp(th);
        const double rss = run_start(th, arr.lx, arr.y, v_pre, options, bounds);
        if (std::isfinite(rss) && rss < best_rss) {
          best_rss = rss;
          std::copy(th, th + 3, best_th);
          have_best = true;
        }
      }
  if (!have_best) throw DataError("fit_weibull: no start converged to a finite fit");

  WeibullCoverageModel model;
  model.a = std::exp(best_th[0]);
  model.b = std::exp(best_th[1]);
  model.c = std::exp(best_th[2]);
  model.v_pre = v_pre;
  return model;
}

BootstrapFit bootstrap_fit(std::span<const ParameterPoint> points,
                           std::span<const double> semi_axes, const SampleCloud& cloud,
                           int replicates, std::uint64_t seed, double v_pre,
                           double cv_threshold, const FitOptions& options,
                           unsigned threads) {
  if (points.empty()) throw std::invalid_argument("bootstrap_fit: no points");
  if (replicates < 2) throw std::invalid_argument("bootstrap_fit: replicates must be >= 2");
  if (!(std::isfinite(cv_threshold) && cv_threshold > 0.0))
    throw std::invalid_argument("bootstrap_fit: cv_threshold must be positive");

  const auto n = points.size();
  struct Rep {
    bool ok = false;
    double a = 0, b = 0, c = 0;
    std::exception_ptr hard_failure;
  };
  std::vector<Rep> reps(static_cast<std::size_t>(replicates));

  parallel_chunks(static_cast<std::size_t>(replicates), threads,
                  [&](std::size_t, std::size_t begin, std::size_t end) {
                    SampleCloud local = cloud;  // shared points, private flags
                    std::vector<ParameterPoint> perm(points.begin(), points.end());
                    for (std::size_t r = begin; r < end; ++r) {
                      Xoshiro256pp rng(stream_seed(seed, r));
                      // Fisher-Yates over a fresh copy of the input order.
                      std::copy(points.begin(), points.end(), perm.begin());
                      for (std::size_t i = n - 1; i > 0; --i) {
                        const auto k = static_cast<std::size_t>(rng.uniform_index(i + 1));
                        std::swap(perm[i], perm[k]);
                      }
                      try {
                        const auto curve = coverage_curve(perm, semi_axes, local);
                        const auto m = fit_weibull(curve, v_pre, options);
                        reps[r] = {true, m.a, m.b, m.c, nullptr};
                      } catch (const DataError&) {
                        reps[r].ok = false;  // counted as a failed replicate
                      } catch (...) {
                        reps[r].hard_failure = std::current_exception();
                      }
                    }
                  });
  for (const auto& r : reps)
    if (r.hard_failure) std::rethrow_exception(r.hard_failure);

  FitDiagnostics diag;
  diag.replicates = replicates;
  diag.cv_threshold = cv_threshold;
  std::vector<std::array<double, 3>> ok;
  for (const auto& r : reps)
    if (r.ok)
      ok.push_back({r.a, r.b, r.c});
    else
      ++diag.failed;
  if (diag.failed * 2 > replicates)
    throw DataError("bootstrap_fit: more than half of the replicates failed");

  for (int p = 0; p < 3; ++p) {
    double mean = 0.0;
    for (const auto& v : ok) mean += v[static_cast<std::size_t>(p)];
    mean /= static_cast<double>(ok.size());
    double var = 0.0;
    for (const auto& v : ok) {
      const double d = v[static_cast<std::size_t>(p)] - mean;
      var += d * d;
    }
    const auto ps = static_cast<std::size_t>(p);
    diag.param_mean[ps] = mean;
    diag.param_cv[ps] = ok.size() >= 2
                            ? std::sqrt(var / static_cast<double>(ok.size() - 1)) /
                                  std::fabs(mean)
                            : std::numeric_limits<double>::infinity();
  }

  SampleCloud central_cloud = cloud;
  const auto central_curve = coverage_curve(points, semi_axes, central_cloud);
  BootstrapFit out;
  out.model = fit_weibull(central_curve, v_pre, options);
  double rss = 0.0;
  for (const auto& p : central_curve) {
    const double r = p.volume - out.model.value(static_cast<double>(p.count));
    rss += r * r;
  }
  diag.rss = rss;
  diag.converged = diag.param_cv[0] <= cv_threshold;
  out.diagnostics = diag;
  return out;
}

double coverage_coefficient(const WeibullCoverageModel& model, double volume) {
  validate_model(model);
  if (!std::isfinite(volume))
    throw std::invalid_argument("coverage_coefficient: volume must be finite");
  const double sat = model.saturation();
  const double slack = 1e-9 * std::max(1.0, sat);
  if (volume < model.v_pre - slack || volume > sat + slack)
    throw std::domain_error("coverage_coefficient: volume outside [v_pre, a + v_pre]");
  return std::clamp(volume / sat, 0.0, 1.0);
}

std::int64_t required_count(const WeibullCoverageModel& model, double target_coverage) {
  validate_model(model);
  if (!(std::isfinite(target_coverage) && target_coverage > 0.0 && target_coverage < 1.0))
    throw std::domain_error("required_count: target coverage must lie in (0, 1)");
  const double target_volume = target_coverage * model.saturation();
  if (target_volume <= model.v_pre) return 0;

  const double ratio = (target_volume - model.v_pre) / model.a;  // in (0, 1)
  const double x = std::pow(-std::log1p(-ratio) / model.b, 1.0 / model.c);
  if (!(x < 9.0e18)) throw std::domain_error("required_count: count overflows");

  auto xi = static_cast<std::int64_t>(std::ceil(x - 1e-9));
  if (xi < 0) xi = 0;
  // The closed form lands within a step of the answer; correct fp slop.
  int guard = 0;
  while (model.value(static_cast<double>(xi)) < target_volume) {
    ++xi;
    if (++guard > 64) throw std::logic_error("required_count: inversion failed");
  }
  while (xi > 0 && model.value(static_cast<double>(xi - 1)) >= target_volume) {
    --xi;
    if (++guard > 128) throw std::logic_error("required_count: inversion failed");
  }
  return xi;
}

double prediction_envelope(const WeibullCoverageModel& model, double x,
                           double kernel_volume) {
  validate_model(model);
  if (!(std::isfinite(kernel_volume) && kernel_volume >= 0.0))
    throw std::invalid_argument("prediction_envelope: kernel volume must be >= 0");
  return std::min(model.value(x), model.v_pre + x * kernel_volume);
}

}  // namespace covplan
