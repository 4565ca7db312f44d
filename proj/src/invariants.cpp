#include "semitoric/invariants.hpp"

#include "semitoric/parallel.hpp"
#include "semitoric/dynamics.hpp"
#include "semitoric/errors.hpp"
#include "semitoric/svg.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>
#include <sstream>

namespace semitoric {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kScanPoints = 256;

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

// Chebyshev–Lobatto nodes on [lo, hi], increasing.
std::vector<double> scanNodes(double lo, double hi, int n) {
  std::vector<double> z(n + 1);
  for (int k = 0; k <= n; ++k) z[k] = 0.5 * (lo + hi) - 0.5 * (hi - lo) * std::cos(kPi * k / n);
  z.front() = lo;
  z.back() = hi;
  return z;
}

double bisectRoot(const std::function<double(double)>& g, double a, double b) {
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(g, a, b, boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (r.first + r.second);
}

// All zeros of g on [lo, hi]: sign changes on a scan plus touching pairs found
// by minimizing |g| around local minima of the scanned values.
void collectRoots(const std::function<double(double)>& g, const std::vector<double>& z, std::vector<double>& roots) {
  const std::size_t n = z.size();
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = g(z[k]);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (v[k] == 0.0) {
      roots.push_back(z[k]);
    } else if (v[k] * v[k + 1] < 0.0) {
      roots.push_back(bisectRoot(g, z[k], z[k + 1]));
    }
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double s = v[k] > 0 ? 1.0 : -1.0;
    if (v[k] == 0.0 || v[k - 1] * s <= 0.0 || v[k + 1] * s <= 0.0) continue;
    if (!(std::abs(v[k]) <= std::abs(v[k - 1]) && std::abs(v[k]) <= std::abs(v[k + 1]))) continue;
    const auto best = boost::math::tools::brent_find_minima([&](double x) { return s * g(x); }, z[k - 1], z[k + 1], 50);
    if (best.second < 0.0) {
      roots.push_back(bisectRoot(g, z[k - 1], best.first));
      roots.push_back(bisectRoot(g, best.first, z[k + 1]));
    }
  }
}

boost::math::quadrature::tanh_sinh<double>& quadrature() {
  thread_local boost::math::quadrature::tanh_sinh<double> q;
  return q;
}

}  // namespace

std::pair<double, double> energyRange(const ReducedModel& m) {
  if (m.empty()) {
    const double v = m.a(m.z_min);
    return {v, v};
  }
  const auto lowF = [&](double z) { return m.a(z) - std::abs(m.b(z)); };
  const auto highF = [&](double z) { return -(m.a(z) + std::abs(m.b(z))); };
  const auto z = scanNodes(m.z_min, m.z_max, kScanPoints);
  auto extremum = [&](const auto& f) {
    std::size_t best = 0;
    double bv = f(z[0]);
    for (std::size_t k = 1; k < z.size(); ++k) {
      const double v = f(z[k]);
      if (v < bv) bv = v, best = k;
    }
    const double a = z[best == 0 ? 0 : best - 1];
    const double b = z[std::min(best + 1, z.size() - 1)];
    const auto r = boost::math::tools::brent_find_minima(f, a, b, 50);
    return std::min(bv, r.second);
  };
  return {extremum(lowF), -extremum(highF)};
}

double reducedAction(const ReducedModel& m, double h) {
  if (m.empty()) return 0.0;
  const auto a = m.a;
  const auto b = m.b;
  // fraction of the circle over z on which a + |b| cos φ < h
  const auto fraction = [&](double z) {
    const double bz = std::abs(b(z));
    const double d = h - a(z);
    if (bz <= 0.0) return d > 0.0 ? 1.0 : 0.0;
    const double c = d / bz;
    if (c >= 1.0) return 1.0;
    if (c <= -1.0) return 0.0;
    return 1.0 - std::acos(c) / kPi;
  };

  std::vector<double> edges{m.z_min, m.z_max};
  const auto z = scanNodes(m.z_min, m.z_max, kScanPoints);
  collectRoots([&](double x) { return h - a(x) - std::abs(b(x)); }, z, edges);
  collectRoots([&](double x) { return h - a(x) + std::abs(b(x)); }, z, edges);
  std::sort(edges.begin(), edges.end());

  double area = 0.0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double lo = edges[k], hi = edges[k + 1];
    if (!(hi > lo)) continue;
    const double mid = fraction(0.5 * (lo + hi));
    if (mid == 0.0 || mid == 1.0) {
      area += mid * (hi - lo);
      continue;
    }
    area += quadrature().integrate(fraction, lo, hi, 1e-14);
  }
  return m.weight * area;
}

ReturnTimes returnTimes(const SystemInstance& system, double l, double h, double rtol, double time_cap) {
  const ReducedModel m = system.reduced(l);
  const auto [hlo, hhi] = energyRange(m);
  if (m.empty() || !(h > hlo && h < hhi)) {
    std::ostringstream msg;
    msg << "return times: (" << l << ", " << h << ") is not a regular value inside the image";
    throw RangeError(msg.str());
  }
  // start where the reduced orbit crosses z = const most steeply
  const auto speed = [&](double z) {
    const double bz = m.b(z);
    if (bz == 0.0) return 0.0;
    const double c = (h - m.a(z)) / bz;
    if (std::abs(c) >= 1.0) return 0.0;
    return std::abs(bz) * std::sqrt(1.0 - c * c);
  };
  const auto z = scanNodes(m.z_min, m.z_max, kScanPoints);
  std::size_t best = 0;
  for (std::size_t k = 1; k < z.size(); ++k)
    if (speed(z[k]) > speed(z[best])) best = k;
  const double z0 = boost::math::tools::brent_find_minima([&](double x) { return -speed(x); },
                                                          z[best == 0 ? 0 : best - 1],
                                                          z[std::min(best + 1, z.size() - 1)], 50)
                        .first;
  const double phi0 = std::acos(std::clamp((h - m.a(z0)) / m.b(z0), -1.0, 1.0));

  ReturnTimes out;
  out.start = system.liftReduced(l, z0, phi0);
  const auto& M = system.manifold();
  OdeOptions opt;
  opt.rtol = rtol;
  opt.atol = rtol * 1e-2;
  opt.max_step = 0.1;
  DormandPrince45 ode(vectorFieldRhs(system, Observable::H()), opt);
  ode.reset(0.0, out.start.coords);

  Eigen::VectorXd f(out.start.coords.size());
  vectorFieldRhs(system, Observable::H())(out.start.coords, f);
  const double dir = f[2] >= 0.0 ? 1.0 : -1.0;
  double prev = 0.0;
  bool left = false;
  while (ode.t() < time_cap) {
    ode.step(time_cap);
    Eigen::VectorXd y = ode.y();
    const double cur = dir * (y[2] - z0);
    if (cur > 0.0) left = true;
    if (left && prev < 0.0 && cur >= 0.0) {
      const auto g = [&](double s) { return dir * (ode.dense(s)[2] - z0); };
      out.tau2 = bisectRoot(g, ode.tPrevious(), ode.t());
      PhasePoint end{ode.dense(out.tau2)};
      M.project(end.coords);
      // the factor farther from its poles carries a well-defined azimuth
      std::size_t fac = 0;
      if (M.factorCount() > 1 && M.kind(0) == FactorKind::Sphere) {
        const double r0 = out.start.coords.segment(M.offset(0), 2).norm();
        const int o1 = M.offset(1);
        const double r1 = out.start.coords.segment(o1, 2).norm();
        if (r1 > r0) fac = 1;
      }
      const double d = system.factorAngle(out.start, fac) - system.factorAngle(end, fac);
      double tau1 = std::fmod(system.rotationSense(fac) * d, 2.0 * kPi);
      if (tau1 < 0.0) tau1 += 2.0 * kPi;
      out.tau1 = tau1;
      return out;
    }
    M.project(y);
    ode.setState(y);
    prev = cur;
  }
  std::ostringstream msg;
  msg << "return times: no return to the starting orbit before t = " << time_cap;
  throw IntegrationError(msg.str());
}

ActionSample actionSample(const SystemInstance& system, double l, double h, ActionMethod method,
                          const EliassonMap* normal_form) {
  ActionSample s;
  s.l = l;
  s.h = h;
  s.j = normal_form ? normal_form->eliassonJ(l, h) : nan();
  const ReducedModel m = system.reduced(l);
  if (method == ActionMethod::Area) {
    s.I = reducedAction(m, h);
    s.tau1 = s.tau2 = nan();
    return s;
  }
  const double hlo = energyRange(m).first;
  const auto rt = returnTimes(system, l, h);
  s.tau1 = rt.tau1;
  s.tau2 = rt.tau2;
  s.I = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&](double x) { return returnTimes(system, l, x).tau2 / (2.0 * kPi); }, hlo, h, 8, 1e-11);
  return s;
}

// ---------------------------------------------------------------------------
// Cartographic charts

namespace {

double positivePart(double x) { return x > 0.0 ? x : 0.0; }

bool sameLevel(double a, double b) { return std::abs(a - b) <= 1e-8 * (1.0 + std::abs(a)); }

}  // namespace

CartographicChart::CartographicChart(const SystemInstance& system, const FocusFocusCensus& census,
                                     std::vector<int> signs, int shear)
    : system_(system), shear_(shear) {
  std::size_t n_ff = 0;
  for (const auto& r : census.records) n_ff += r.kind == SingularityKind::FocusFocus;
  if (signs.empty()) signs.assign(n_ff, +1);
  if (signs.size() != n_ff) throw PreconditionError("cartographic chart: one cut sign per focus-focus point");
  for (int e : signs)
    if (e != 1 && e != -1) throw PreconditionError("cartographic chart: cut signs must be +1 or -1");

  auto [lo, hi] = system.levelRange();
  double top = lo;
  for (const auto& r : census.records) top = std::max(top, r.lambda);
  if (!std::isfinite(hi)) {
    hi = top + (top - lo);
    capped_ = true;
  }
  window_ = {lo, hi};

  std::size_t ff_index = 0;
  std::vector<std::pair<double, int>> ff;  // (η, ε) per line, in census order
  for (const auto& r : census.records) {
    if (sameLevel(r.lambda, lo) || sameLevel(r.lambda, hi) || r.lambda < lo || r.lambda > hi) {
      if (r.kind == SingularityKind::FocusFocus) ++ff_index;
      continue;
    }
    auto it = std::find_if(lines_.begin(), lines_.end(), [&](const CriticalLine& c) { return sameLevel(c.lambda, r.lambda); });
    if (it == lines_.end()) {
      lines_.push_back({});
      lines_.back().lambda = r.lambda;
      it = std::prev(lines_.end());
    }
    if (r.kind == SingularityKind::FocusFocus) {
      it->ff_values.push_back(r.eta);
      const int e = signs[ff_index++];
      if (it->ff_values.size() > 1 && e != it->epsilon)
        throw PreconditionError("cartographic chart: mixed cut directions on one line are not supported");
      it->epsilon = e;
    }
  }
  std::sort(lines_.begin(), lines_.end(), [](const CriticalLine& a, const CriticalLine& b) { return a.lambda < b.lambda; });

  // one-sided second-order slopes on either side of the line
  const double d = 1e-6 * std::max(1.0, hi - lo);
  auto slope = [&](double l0, double step, double h) {
    const double f0 = reducedAction(system.reduced(l0), h);
    const double f1 = reducedAction(system.reduced(l0 + step), h);
    const double f2 = reducedAction(system.reduced(l0 + 2.0 * step), h);
    return (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * step);
  };
  for (auto& line : lines_) {
    std::sort(line.ff_values.begin(), line.ff_values.end());
    const auto [hmin, hmax] = energyRange(system.reduced(line.lambda));
    std::vector<double> cuts{hmin};
    cuts.insert(cuts.end(), line.ff_values.begin(), line.ff_values.end());
    cuts.push_back(hmax);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double h = 0.5 * (cuts[k] + cuts[k + 1]);
      const double kink = slope(line.lambda, d, h) - slope(line.lambda, -d, h);
      const double rounded = std::round(kink);
      if (std::abs(kink - rounded) > 0.05) {
        std::ostringstream msg;
        msg << "cartographic chart: non-integer slope jump " << kink << " across l = " << line.lambda;
        throw AccuracyError(msg.str());
      }
      line.kinks.push_back(static_cast<int>(rounded));
    }
    if (line.ff_values.empty()) {
      for (int k : line.kinks)
        if (k != line.kinks.front()) throw AccuracyError("cartographic chart: inconsistent slope jumps on a regular line");
      line.kappa = -line.kinks.front();
    } else {
      line.kappa = line.epsilon > 0 ? -line.kinks.front() : -line.kinks.back();
    }
  }
}

int CartographicChart::epsilonAt(double lambda) const {
  for (const auto& line : lines_)
    if (sameLevel(line.lambda, lambda)) return line.epsilon;
  throw PreconditionError("cartographic chart: no critical line at this level");
}

double CartographicChart::mu2(double l, double h) const {
  double v = reducedAction(system_.reduced(l), h) + shear_ * l;
  for (const auto& line : lines_) v += line.kappa * positivePart(l - line.lambda);
  return v;
}

// ---------------------------------------------------------------------------
// Invariants

TaylorInvariant taylorInvariant(const CartographicChart& chart, const SingularityRecord& ff, const EliassonMap& nf,
                                const TaylorOptions& opt) {
  if (ff.kind != SingularityKind::FocusFocus) throw PreconditionError("taylor invariant: point is not focus-focus");
  if (!(opt.delta > 0.0 && opt.Delta > opt.delta) || opt.radial < 2 || opt.angular < 4 || opt.fit_degree < 2)
    throw PreconditionError("taylor invariant: invalid sampling annulus");
  const int eps = chart.epsilonAt(ff.lambda);
  const double lambda = nf.lambda;
  // keep the annulus inside the image and away from other critical lines
  double room = std::numeric_limits<double>::infinity();
  {
    const auto [hmin, hmax] = energyRange(chart.system().reduced(lambda));
    room = std::min(std::abs(nf.eliassonJ(lambda, hmin)), std::abs(nf.eliassonJ(lambda, hmax)));
    const auto [lo, hi] = chart.levelWindow();
    room = std::min({room, lambda - lo, hi - lambda});
    for (const auto& line : chart.lines())
      if (!sameLevel(line.lambda, lambda)) room = std::min(room, std::abs(line.lambda - lambda));
  }
  const double scale = std::min(1.0, 0.5 * room / opt.Delta);
  const double delta = opt.delta * scale, Delta = opt.Delta * scale;
  const std::size_t n = static_cast<std::size_t>(opt.radial) * opt.angular;

  // monomials l'^a j^b, 1 <= a + b <= degree, in graded order
  std::vector<std::pair<int, int>> mono;
  for (int d = 1; d <= opt.fit_degree; ++d)
    for (int b = 0; b <= d; ++b) mono.push_back({d - b, b});

  Eigen::MatrixXd A(n, mono.size() + 1);
  Eigen::VectorXd y(n);
  detail::parallelFor(n, opt.threads, [&](std::size_t idx) {
    const int ir = static_cast<int>(idx) / opt.angular;
    const int ia = static_cast<int>(idx) % opt.angular;
    const double r = delta + (Delta - delta) * ir / (opt.radial - 1);
    const double th = 2.0 * kPi * (ia + 0.5) / opt.angular;
    const double lp = r * std::cos(th), j = r * std::sin(th);
    double arg = std::atan2(j, lp);
    if (eps > 0 ? arg > 0.5 * kPi : arg > -0.5 * kPi) arg -= 2.0 * kPi;
    const double h = nf.energy(lambda + lp, j);
    double mu = chart.mu2(lambda + lp, h);
    for (const auto& line : chart.lines())
      if (!sameLevel(line.lambda, lambda) && !line.kinks.empty())
        mu -= (line.kappa + line.kinks.front()) * positivePart(lambda + lp - line.lambda);
    y[idx] = 2.0 * kPi * mu + lp * arg + j * std::log(r) - j;
    A(idx, 0) = 1.0;
    for (std::size_t c = 0; c < mono.size(); ++c)
      A(idx, c + 1) = std::pow(lp / Delta, mono[c].first) * std::pow(j / Delta, mono[c].second);
  });
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
  const double residual = (A * c - y).cwiseAbs().maxCoeff();
  auto coef = [&](int a, int b) {
    for (std::size_t k = 0; k < mono.size(); ++k)
      if (mono[k] == std::pair{a, b}) return c[k + 1] / std::pow(Delta, a + b);
    return 0.0;
  };

  TaylorInvariant t;
  t.lambda = ff.lambda;
  t.eta = ff.eta;
  t.residual = residual;
  t.delta = delta;
  t.Delta = Delta;
  t.constant = c[0];
  t.raw_s10 = coef(1, 0);
  t.s10 = t.raw_s10 - 2.0 * kPi * twistingIndex(t);
  if (t.s10 < 0.0) t.s10 = 0.0;
  t.s01 = coef(0, 1);
  t.s20 = coef(2, 0);
  t.s11 = coef(1, 1);
  t.s02 = coef(0, 2);
  t.branch = eps > 0 ? "arg(z) in (-3pi/2, pi/2], cut along +j" : "arg(z) in (-5pi/2, -pi/2], cut along -j";
  if (residual > opt.max_residual) {
    std::ostringstream msg;
    msg << "taylor invariant: fit residual " << residual << " exceeds " << opt.max_residual << " (annulus ["
        << delta << ", " << Delta << "], degree " << opt.fit_degree << ")";
    throw AccuracyError(msg.str());
  }
  return t;
}

HeightInvariant heightInvariant(const SystemInstance& system, const SingularityRecord& ff) {
  if (ff.kind != SingularityKind::FocusFocus) throw PreconditionError("height invariant: point is not focus-focus");
  const ReducedModel m = system.reduced(ff.lambda);
  ReducedModel flipped = m;
  flipped.a = [a = m.a](double z) { return -a(z); };
  HeightInvariant out;
  out.lambda = ff.lambda;
  out.eta = ff.eta;
  out.height = reducedAction(m, ff.eta);
  out.complement = reducedAction(flipped, -ff.eta);
  out.total = m.totalAction();
  return out;
}

HeightInvariant heightInvariant(const CartographicChart& chart, const SingularityRecord& ff) {
  if (ff.kind != SingularityKind::FocusFocus) throw PreconditionError("height invariant: point is not focus-focus");
  const ReducedModel m = chart.system().reduced(ff.lambda);
  const auto [hmin, hmax] = energyRange(m);
  HeightInvariant out;
  out.lambda = ff.lambda;
  out.eta = ff.eta;
  const double bottom = chart.mu2(ff.lambda, hmin);
  out.height = chart.mu2(ff.lambda, ff.eta) - bottom;
  out.total = chart.mu2(ff.lambda, hmax) - bottom;
  out.complement = out.total - out.height;
  return out;
}

std::optional<std::pair<long, long>> rationalize(double x, long max_den, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  // convergents p_k / q_k of the continued fraction of x
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(r);
    if (std::abs(a) > 1e12) break;
    const long ai = static_cast<long>(a);
    const long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    if (std::abs(static_cast<double>(p2) / q2 - x) <= tol) return std::pair{p2, q2};
    p0 = p1, q0 = q1, p1 = p2, q1 = q2;
    const double frac = r - a;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

namespace {

// Corners of a piecewise-linear graph sampled at increasing x.
std::vector<Eigen::Vector2d> corners(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> slope(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) slope[k] = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
  struct Run {
    std::size_t first, last;  // segment indices
  };
  std::vector<Run> runs;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (!runs.empty()) {
      const double s = slope[runs.back().first];
      if (std::abs(slope[k] - s) <= 1e-6 * (1.0 + std::abs(s))) {
        runs.back().last = k;
        continue;
      }
    }
    runs.push_back({k, k});
  }
  // a single segment straddling a corner has a slope between its neighbours
  std::vector<Run> kept;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const bool single = runs[i].first == runs[i].last;
    if (single && i > 0 && i + 1 < runs.size()) {
      const double a = slope[runs[i - 1].last], b = slope[runs[i + 1].first], s = slope[runs[i].first];
      if ((s - a) * (s - b) < 0.0) continue;
    }
    kept.push_back(runs[i]);
  }
  auto lineOf = [&](const Run& r) {
    const std::size_t a = r.first, b = r.last + 1;
    const double s = (y[b] - y[a]) / (x[b] - x[a]);
    return std::pair{s, y[a] - s * x[a]};
  };
  std::vector<Eigen::Vector2d> out{{x.front(), y.front()}};
  for (std::size_t i = 0; i + 1 < kept.size(); ++i) {
    const auto [s1, c1] = lineOf(kept[i]);
    const auto [s2, c2] = lineOf(kept[i + 1]);
    const double xv = (c2 - c1) / (s1 - s2);
    out.push_back({xv, s1 * xv + c1});
  }
  out.push_back({x.back(), y.back()});
  return out;
}

PolygonVertex snap(const Eigen::Vector2d& p, bool& warning) {
  PolygonVertex v;
  v.point = p;
  const auto fx = rationalize(p.x());
  const auto fy = rationalize(p.y());
  if (fx && fy) {
    v.rational = true;
    v.x_fraction = *fx;
    v.y_fraction = *fy;
    v.point = {static_cast<double>(fx->first) / fx->second, static_cast<double>(fy->first) / fy->second};
  } else {
    warning = true;
  }
  return v;
}

}  // namespace

SemitoricPolygon cartographicPolygon(const CartographicChart& chart, int samples) {
  if (samples < 8) throw PreconditionError("polygon: at least 8 samples");
  const auto [lo, hi] = chart.levelWindow();
  std::vector<double> x(samples + 1);
  for (int k = 0; k <= samples; ++k) x[k] = lo + (hi - lo) * k / samples;
  for (const auto& line : chart.lines()) x.push_back(line.lambda);
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }), x.end());

  std::vector<double> lower(x.size()), upper(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const auto [hmin, hmax] = energyRange(chart.system().reduced(x[k]));
    lower[k] = chart.mu2(x[k], hmin);
    upper[k] = chart.mu2(x[k], hmax);
  }

  SemitoricPolygon poly;
  poly.capped = chart.capped();
  std::vector<Eigen::Vector2d> ring = corners(x, lower);
  auto top = corners(x, upper);
  std::reverse(top.begin(), top.end());
  for (const auto& p : top) {
    if ((p - ring.back()).norm() > 1e-9) ring.push_back(p);
  }
  if (ring.size() > 1 && (ring.back() - ring.front()).norm() <= 1e-9) ring.pop_back();
  for (const auto& p : ring) poly.vertices.push_back(snap(p, poly.warning));

  for (const auto& line : chart.lines()) {
    for (double eta : line.ff_values) {
      poly.cuts.push_back(line.lambda);
      poly.signs.push_back(line.epsilon);
      poly.marked.push_back({line.lambda, chart.mu2(line.lambda, eta)});
    }
  }
  return poly;
}

SemitoricPolygon SemitoricPolygon::sheared(int m) const {
  SemitoricPolygon out = *this;
  for (auto& v : out.vertices) {
    v.point.y() += m * v.point.x();
    if (v.rational) {
      auto& [p, q] = v.y_fraction;
      const auto [px, qx] = v.x_fraction;
      // y + m x over the common denominator
      const long num = p * qx + m * px * q;
      const long den = q * qx;
      const long g = std::gcd(num, den);
      v.y_fraction = {num / g, den / g};
    }
  }
  for (auto& p : out.marked) p.y() += m * p.x();
  for (auto& k : out.twisting) k += m;
  return out;
}

int twistingIndex(const TaylorInvariant& taylor) {
  const double x = taylor.raw_s10 / (2.0 * kPi);
  if (!std::isfinite(x)) throw AccuracyError("twisting index: fitted shear is not finite");
  if (std::abs(x - std::round(x)) < 1e-6) return static_cast<int>(std::round(x));
  return static_cast<int>(std::floor(x));
}

void requireNonDegenerate(const SystemInstance& system, const FocusFocusCensus& census) {
  if (const auto* c = std::get_if<CoupledAngularMomenta>(&system.family())) {
    const auto tt = camTransitionTimes(c->R1, c->R2);
    for (double t : {tt.lower, tt.upper}) {
      if (std::abs(c->t - t) < 1e-6) {
        std::ostringstream msg;
        msg << "t = " << c->t << " is within 1e-6 of the transition time " << t;
        throw NearDegenerateError(msg.str());
      }
    }
  }
  for (const auto& r : census.records) {
    if (r.kind == SingularityKind::Degenerate) {
      std::ostringstream msg;
      msg << "degenerate rank-0 point at (L, H) = (" << r.lambda << ", " << r.eta << ")";
      throw NearDegenerateError(msg.str());
    }
  }
}

nlohmann::json computeInvariants(const SystemInstance& system, const InvariantOptions& opt) {
  using nlohmann::json;
  const FocusFocusCensus census = countFocusFocus(system, RankZeroOptions{.random_starts = 0});
  requireNonDegenerate(system, census);
  const CartographicChart chart(system, census, opt.signs, opt.shear);

  json doc;
  doc["schema"] = "semitoric.invariants/1";
  doc["family"] = system.familyName();
  json params = json::object();
  for (const auto& [k, v] : system.parameters()) params[k] = v;
  doc["parameters"] = params;
  doc["n_ff"] = census.n_ff;
  json points = json::array();
  for (const auto& r : census.records)
    points.push_back({{"kind", kindName(r.kind)}, {"lambda", r.lambda}, {"eta", r.eta}});
  doc["rank_zero"] = points;

  json taylor = json::array(), height = json::array(), normal = json::array();
  std::vector<int> twisting;
  for (const auto& r : census.records) {
    if (r.kind != SingularityKind::FocusFocus) continue;
    const EliassonMap nf = eliassonMapAt(system, r.point, opt.nf_degree);
    const TaylorInvariant t = taylorInvariant(chart, r, nf, opt.taylor);
    twisting.push_back(twistingIndex(t));
    taylor.push_back({{"lambda", t.lambda},
                      {"eta", t.eta},
                      {"s10", t.s10},
                      {"s01", t.s01},
                      {"s20", t.s20},
                      {"s11", t.s11},
                      {"s02", t.s02},
                      {"raw_s10", t.raw_s10},
                      {"fit_residual", t.residual},
                      {"annulus", {t.delta, t.Delta}},
                      {"branch", t.branch}});
    const HeightInvariant h = heightInvariant(chart, r);
    height.push_back({{"lambda", h.lambda}, {"eta", h.eta}, {"height", h.height}, {"complement", h.complement}});
    normal.push_back(nf.toJson());
  }
  if (census.n_ff > 0) {
    doc["taylor"] = taylor;
    doc["height"] = height;
  }

  SemitoricPolygon poly = cartographicPolygon(chart, opt.polygon_samples);
  poly.twisting = twisting;
  json verts = json::array(), fracs = json::array();
  for (const auto& v : poly.vertices) {
    verts.push_back({v.point.x(), v.point.y()});
    if (v.rational) {
      fracs.push_back({std::to_string(v.x_fraction.first) + "/" + std::to_string(v.x_fraction.second),
                       std::to_string(v.y_fraction.first) + "/" + std::to_string(v.y_fraction.second)});
    } else {
      fracs.push_back(nullptr);
    }
  }
  doc["polygon"] = {{"vertices", verts}, {"exact", fracs},       {"cuts", poly.cuts},
                    {"signs", poly.signs}, {"capped", poly.capped}, {"warning", poly.warning}};
  if (census.n_ff > 0) {
    doc["twisting_index"] = twisting;
    doc["normal_form"] = normal;
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Pictures

MomentumImage momentumImage(const SystemInstance& system, int samples, double cap) {
  if (samples < 2) throw PreconditionError("momentum image: at least 2 samples");
  auto [lo, hi] = system.levelRange();
  MomentumImage img;
  img.critical = countFocusFocus(system, RankZeroOptions{.random_starts = 0}).records;
  if (!std::isfinite(hi)) {
    double top = lo;
    for (const auto& r : img.critical) top = std::max(top, r.lambda);
    hi = cap > lo ? cap : top + (top - lo);
  }
  for (int k = 0; k <= samples; ++k) {
    const double l = lo + (hi - lo) * k / samples;
    const auto [a, b] = energyRange(system.reduced(l));
    img.lower.push_back({l, a});
    img.upper.push_back({l, b});
  }
  return img;
}

namespace {

std::pair<Eigen::Vector2d, Eigen::Vector2d> bounds(const std::vector<Eigen::Vector2d>& pts) {
  Eigen::Vector2d lo = pts.front(), hi = pts.front();
  for (const auto& p : pts) lo = lo.cwiseMin(p), hi = hi.cwiseMax(p);
  const Eigen::Vector2d pad = 0.05 * (hi - lo).cwiseMax(Eigen::Vector2d::Constant(1e-3));
  return {lo - pad, hi + pad};
}

}  // namespace

std::string momentumImageSvg(const MomentumImage& img) {
  std::vector<Eigen::Vector2d> outline = img.lower;
  outline.insert(outline.end(), img.upper.rbegin(), img.upper.rend());
  const auto [lo, hi] = bounds(outline);
  SvgCanvas svg(480, 360, lo, hi);
  svg.polygon(outline, "#e6e6e6", "#000000");
  for (const auto& r : img.critical) {
    const bool ff = r.kind == SingularityKind::FocusFocus;
    svg.dot({r.lambda, r.eta}, ff ? 4.0 : 3.0, ff ? "#b00000" : "#000000");
  }
  return svg.str();
}

std::string polygonSvg(const SemitoricPolygon& poly) {
  std::vector<Eigen::Vector2d> pts;
  for (const auto& v : poly.vertices) pts.push_back(v.point);
  const auto [lo, hi] = bounds(pts);
  SvgCanvas svg(480, 360, lo, hi);
  svg.polygon(pts, "#e6e6e6", "#000000");
  for (std::size_t r = 0; r < poly.marked.size(); ++r) {
    const Eigen::Vector2d end(poly.marked[r].x(), poly.signs[r] > 0 ? hi.y() : lo.y());
    svg.line(poly.marked[r], end, "#000000", true);
    svg.dot(poly.marked[r], 4.0, "#b00000");
  }
  return svg.str();
}

}  // namespace semitoric
