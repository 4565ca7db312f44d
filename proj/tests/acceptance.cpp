// Acceptance suite: one PASS/FAIL line per criterion. Exit status is non-zero
// when a gating criterion fails; criterion 5 is reported but not gating.

#include "semitoric/catalog.hpp"
#include "semitoric/dynamics.hpp"
#include "semitoric/invariants.hpp"
#include "semitoric/normal_form.hpp"
#include "semitoric/singularities.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace semitoric;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  bool gating;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

SystemInstance cam(double R1, double R2, double t) { return SystemInstance(CoupledAngularMomenta{R1, R2, t}); }

const SingularityRecord* focus(const FocusFocusCensus& c) {
  for (const auto& r : c.records)
    if (r.kind == SingularityKind::FocusFocus) return &r;
  return nullptr;
}

// closed forms used as oracles
double rD(double R1, double R2, double t) { return std::sqrt(camDiscriminant(R1, R2, t)); }

double heightFormula(double R1, double R2, double t) {
  const double r = rD(R1, R2, t);
  return 2.0 * std::min(R1, R2) + r / (kPi * t) - (2.0 * R2 / kPi) * std::atan2(r, R2 - t * R1) -
         (2.0 * R1 / kPi) * std::atan2(r, R2 + t * R1 - 2.0 * R2 * t);
}

std::array<double, 5> taylorFormula(double R1, double R2, double t) {
  const double r = rD(R1, R2, t);
  const double num = R2 * R2 * (2 * t - 1) - R1 * R2 * (t + 1) + R1 * R1 * t;
  const double s10 = std::atan(num / ((R1 - R2) * r));
  const double s01 = std::log(4 * r * r * r / (std::sqrt(R1) * std::pow(R2, 1.5) * (1 - t) * t * t));
  const double R1_2 = R1 * R1, R1_3 = R1_2 * R1, R1_4 = R1_3 * R1;
  const double R2_2 = R2 * R2, R2_3 = R2_2 * R2, R2_4 = R2_3 * R2;
  const double u = 2 * t - 1;
  const double s20 = (-R2_4 * u * u * u - R1 * R2_3 * (32 * t * t * t - 46 * t * t + 17 * t - 1) -
                      3 * R1_2 * R2_2 * t * (4 * t * t - 7 * t + 1) - R1_3 * R2 * (5 * t - 3) * t * t - R1_4 * t * t * t) /
                     (16 * R1 * R2 * r * r * r);
  const double s11 =
      (R2 - R1) * (R2_2 * u * u + 2 * R1 * R2 * t * (6 * t - 1) + R1_2 * t * t) / (8 * R1 * R2 * r * r);
  const double s02 = (R2_4 * u * u * u - R1 * R2_3 * (16 * t * t * t - 42 * t * t + 15 * t + 1) -
                      R1_2 * R2_2 * t * (28 * t * t - 3 * t - 3) + R1_3 * R2 * t * t * (13 * t - 3) + R1_4 * t * t * t) /
                     (16 * R1 * R2 * r * r * r);
  return {s10, s01, s20, s11, s02};
}

// 1 ------------------------------------------------------------------------
Outcome transitionTimes() {
  double worst = 0.0;
  std::ostringstream bad;
  for (auto [R1, R2] : {std::pair{1.0, 1.0}, {1.0, 1.5}, {1.0, 2.0}, {2.0, 1.0}}) {
    const auto tt = camTransitionTimes(R1, R2);
    const auto flips =
        transitionScan([=](double t) { return cam(R1, R2, t); }, 0.0, 1.0, 200, 1e-10);
    std::vector<double> expected{tt.lower};
    if (tt.upper <= 1.0) expected.push_back(tt.upper);
    if (flips.size() != expected.size()) {
      bad << " (" << R1 << "," << R2 << "): " << flips.size() << " flips;";
      worst = 1.0;
      continue;
    }
    for (std::size_t k = 0; k < flips.size(); ++k) worst = std::max(worst, std::abs(flips[k].value - expected[k]));
  }
  return {worst < 1e-6, "max |t_detected - t_formula| = " + fmt("%.2e", worst) + bad.str()};
}

// 2 ------------------------------------------------------------------------
Outcome census() {
  std::ostringstream why;
  bool ok = true;
  {
    const auto c = countFocusFocus(SystemInstance(CoupledSpinOscillator{1.0, 1.0}));
    ok &= c.n_ff == 1 && c.records.size() == 2;
    for (const auto& r : c.records) {
      const double z = r.point.coords[2];
      const bool atNorth = std::abs(z - 1.0) < 1e-12 && r.point.coords.norm() - 1.0 < 1e-12;
      const bool atSouth = std::abs(z + 1.0) < 1e-12 && r.point.coords.norm() - 1.0 < 1e-12;
      ok &= (atNorth && r.kind == SingularityKind::FocusFocus) || (atSouth && r.kind == SingularityKind::EllipticElliptic);
    }
    if (!ok) why << " spin-oscillator mismatch;";
  }
  int checked = 0;
  for (auto [R1, R2] : {std::pair{1.0, 1.0}, {1.0, 1.5}, {1.0, 2.0}, {2.0, 1.0}}) {
    const auto tt = camTransitionTimes(R1, R2);
    for (int k = 1; k < 40; ++k) {
      const double t = k / 40.0;
      if (std::abs(t - tt.lower) < 1e-3 || std::abs(t - tt.upper) < 1e-3) continue;
      const auto c = countFocusFocus(cam(R1, R2, t));
      const bool inside = t > tt.lower && t < tt.upper;
      bool here = c.records.size() == 4;
      for (const auto& r : c.records) {
        const bool ffPole = r.point.coords[2] > 0.5 && r.point.coords[5] < -0.5;
        const auto want = ffPole && inside ? SingularityKind::FocusFocus : SingularityKind::EllipticElliptic;
        here &= r.kind == want && std::abs(std::abs(r.point.coords[2]) - 1.0) < 1e-12 &&
                std::abs(std::abs(r.point.coords[5]) - 1.0) < 1e-12;
      }
      here &= c.n_ff == (inside ? 1 : 0);
      if (!here) why << " cam(" << R1 << "," << R2 << "," << t << ");";
      ok &= here;
      ++checked;
    }
  }
  return {ok, std::to_string(checked) + " coupled-angular-momenta points and the spin-oscillator" + why.str()};
}

// 3 ------------------------------------------------------------------------
Outcome height() {
  double worst = 0.0;
  for (auto [R1, R2, t] : {std::tuple{1.0, 2.0, 0.5}, {1.0, 1.5, 0.4}, {1.0, 1.0, 0.5}, {1.0, 1.0, 0.35},
                           {2.0, 1.0, 0.5}, {1.5, 1.0, 0.6}}) {
    const auto s = cam(R1, R2, t);
    const auto c = countFocusFocus(s);
    const auto* ff = focus(c);
    if (!ff) return {false, "no focus-focus point at a height sample"};
    const CartographicChart chart(s, c, {+1});
    const double h = heightInvariant(chart, *ff).height;
    worst = std::max(worst, std::abs(h / heightFormula(R1, R2, t) - 1.0));
  }
  return {worst < 1e-3, "max relative error " + fmt("%.2e", worst) + " at 6 points"};
}

// 4, 5 ---------------------------------------------------------------------
TaylorInvariant fitTaylor(double R1, double R2, double t) {
  const auto s = cam(R1, R2, t);
  const auto c = countFocusFocus(s);
  const auto* ff = focus(c);
  if (!ff) throw std::runtime_error("no focus-focus point");
  const EliassonMap nf = eliassonMapAt(s, ff->point, 6);
  return taylorInvariant(CartographicChart(s, c, {+1}), *ff, nf);
}

Outcome taylorLinear() {
  double worst = 0.0;
  std::ostringstream os;
  for (auto [R1, R2, t] : {std::tuple{1.0, 2.0, 0.5}, {1.0, 1.5, 0.4}, {1.0, 3.0, 0.6}}) {
    const auto fit = fitTaylor(R1, R2, t);
    const auto ref = taylorFormula(R1, R2, t);
    const double e10 = std::abs(std::remainder(fit.s10 - ref[0], 2.0 * kPi));
    const double e01 = std::abs(fit.s01 - ref[1]);
    worst = std::max({worst, e10, e01});
    if (R2 == 2.0) os << "s10 = " << fmt("%.5f", fit.s10) << ", s01 = " << fmt("%.5f", fit.s01) << " at (1,2,1/2); ";
  }
  // reported only: for R1 > R2 the continuous branch is atan2(-num, -den)
  {
    const double R1 = 2.0, R2 = 1.0, t = 0.5;
    const auto fit = fitTaylor(R1, R2, t);
    const double num = R2 * R2 * (2 * t - 1) - R1 * R2 * (t + 1) + R1 * R1 * t;
    const double ref = std::atan2(-num, -(R1 - R2) * rD(R1, R2, t));
    os << "(2,1,1/2) s10 error " << fmt("%.1e", std::abs(std::remainder(fit.s10 - ref, 2.0 * kPi)))
       << " [not gating]; ";
  }
  return {worst < 1e-2, os.str() + "max abs error " + fmt("%.2e", worst)};
}

Outcome taylorQuadratic() {
  const auto fit = fitTaylor(1.0, 2.0, 0.5);
  const auto ref = taylorFormula(1.0, 2.0, 0.5);
  const double e20 = std::abs(fit.s20 / ref[2] - 1.0);
  const double e11 = std::abs(fit.s11 / ref[3] - 1.0);
  const double e02 = std::abs(fit.s02 / ref[4] - 1.0);
  const double worst = std::max({e20, e11, e02});
  return {worst < 5e-2, "relative errors s20 " + fmt("%.1e", e20) + ", s11 " + fmt("%.1e", e11) + ", s02 " +
                            fmt("%.1e", e02) + " at (1,2,1/2)"};
}

// 6 ------------------------------------------------------------------------
Outcome regionMapCheck() {
  const int grid = 64;
  const RegionMap map = regionMap(1.0, 2.0, grid, 1);
  bool seen[3] = {false, false, false};
  for (int v : map.counts)
    if (v >= 0 && v <= 2) seen[v] = true;
  // s2 = 0 row against the coupled angular momenta interval
  const auto tt = camTransitionTimes(1.0, 2.0);
  double first = -1, last = -1;
  for (int i = 0; i < grid; ++i) {
    if (map.at(i, 0) > 0) {
      if (first < 0) first = map.s1_axis[i];
      last = map.s1_axis[i];
    }
  }
  const double cell = 1.0 / (grid - 1);
  const double err = first < 0 ? 1.0 : std::max(std::abs(first - tt.lower), std::abs(last - tt.upper)) / cell;
  return {seen[0] && seen[1] && seen[2] && err < 2.0,
          std::string("counts {0,1,2} present: ") + (seen[0] && seen[1] && seen[2] ? "yes" : "no") +
              "; s2 = 0 boundary error " + fmt("%.2f", err) + " cells"};
}

// 7 ------------------------------------------------------------------------
Outcome groupLaws() {
  std::ostringstream why;
  bool ok = true;
  for (const SystemInstance& s : {cam(1.0, 2.0, 0.5), SystemInstance(TwoFocusFamily{1.0, 2.0, 0.5, 0.5})}) {
    const auto c = countFocusFocus(s);
    std::vector<const SingularityRecord*> ffs;
    for (const auto& r : c.records)
      if (r.kind == SingularityKind::FocusFocus) ffs.push_back(&r);
    std::vector<EliassonMap> nfs;
    for (const auto* r : ffs) nfs.push_back(eliassonMapAt(s, r->point, 6));
    auto indices = [&](const std::vector<int>& signs, int shear) {
      const CartographicChart chart(s, c, signs, shear);
      std::vector<int> k;
      for (std::size_t r = 0; r < ffs.size(); ++r) k.push_back(twistingIndex(taylorInvariant(chart, *ffs[r], nfs[r])));
      return k;
    };
    const std::vector<int> plus(ffs.size(), +1);
    const auto base = indices(plus, 0);
    for (int m : {-1, 1, 2}) {
      auto k = indices(plus, m);
      for (std::size_t r = 0; r < k.size(); ++r)
        if (k[r] != base[r] + m) ok = false, why << " shear " << m << " on " << s.familyName() << ";";
    }
    for (std::size_t flip = 0; flip < ffs.size(); ++flip) {
      auto signs = plus;
      signs[flip] = -1;
      if (indices(signs, 0) != base) ok = false, why << " flip " << flip << " on " << s.familyName() << ";";
    }
  }
  double worst = 0.0;
  for (double R2 : {1.5, 2.0, 3.0}) {
    const double R1 = 1.0;
    const auto s = cam(R1, R2, 0.0);
    const auto poly = cartographicPolygon(CartographicChart(s, countFocusFocus(s), {}));
    const std::vector<Eigen::Vector2d> expected{{-2 * R1, -2}, {2 * (R2 - R1), -2}, {2 * R2, 0}, {0, 0}};
    if (poly.vertices.size() != expected.size()) {
      ok = false;
      why << " toric polygon has " << poly.vertices.size() << " vertices;";
      continue;
    }
    const double shift = poly.vertices[0].point.y() - expected[0].y();
    for (std::size_t k = 0; k < expected.size(); ++k)
      worst = std::max(worst, (poly.vertices[k].point - Eigen::Vector2d(0, shift) - expected[k]).norm());
  }
  ok &= worst < 1e-4;
  return {ok, "shear and cut-flip laws on two systems; toric parallelogram error " + fmt("%.1e", worst) + why.str()};
}

// 8 ------------------------------------------------------------------------
Outcome normalForms() {
  double nfr = 0.0, rt = 0.0;
  for (const SystemInstance& s : {SystemInstance(CoupledSpinOscillator{1.0, 1.0}), cam(1.0, 2.0, 0.5)}) {
    const auto c = countFocusFocus(s);
    const auto* ff = focus(c);
    if (!ff) return {false, "missing focus-focus point"};
    const auto nf = eliassonMapAt(s, ff->point, 6);
    nfr = std::max(nfr, nf.normal_form_residual);
    rt = std::max(rt, nf.round_trip_residual);
  }
  return {nfr < 1e-9 && rt < 1e-9, "off-normal " + fmt("%.1e", nfr) + ", round trip " + fmt("%.1e", rt)};
}

// 9 ------------------------------------------------------------------------
Outcome oracleEquivalence() {
  std::mt19937_64 rng(20240607);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int samples = 0;
  for (const SystemInstance& s : {cam(1.0, 2.0, 0.5), SystemInstance(CoupledSpinOscillator{1.0, 1.0})}) {
    const auto c = countFocusFocus(s);
    const CartographicChart chart(s, c, {});
    const auto [lo, hi] = chart.levelWindow();
    for (int k = 0; k < 50;) {
      const double l = lo + (hi - lo) * u(rng);
      bool nearLine = l - lo < 0.05 * (hi - lo) || hi - l < 0.05 * (hi - lo);
      for (const auto& line : chart.lines()) nearLine |= std::abs(l - line.lambda) < 0.05 * (hi - lo);
      if (nearLine) continue;
      const auto [hmin, hmax] = energyRange(s.reduced(l));
      const double h = hmin + (hmax - hmin) * (0.05 + 0.9 * u(rng));
      const double a = actionSample(s, l, h, ActionMethod::Area).I;
      const double b = actionSample(s, l, h, ActionMethod::ReturnTime).I;
      worst = std::max(worst, std::abs(a - b));
      ++k, ++samples;
    }
  }
  return {worst < 1e-6, std::to_string(samples) + " values, max |I_area - I_return| = " + fmt("%.2e", worst)};
}

// 10 -----------------------------------------------------------------------
Outcome physics() {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  double bracket = 0.0, period = 0.0, drift = 0.0;
  const std::vector<SystemInstance> systems{SystemInstance(CoupledSpinOscillator{1.0, 1.0}), cam(1.0, 1.5, 0.5),
                                            SystemInstance(TwoFocusFamily{1.0, 2.0, 0.4, 0.6})};
  for (const auto& s : systems) {
    const auto& m = s.manifold();
    auto randomPoint = [&] {
      Eigen::VectorXd x(m.ambientDim());
      for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = g(rng);
      m.project(x);
      return PhasePoint{x};
    };
    for (int i = 0; i < 1000; ++i)
      bracket = std::max(bracket, std::abs(poissonBracket(s, Observable::L(), Observable::H(), randomPoint())));
    for (int i = 0; i < 5; ++i) {
      const PhasePoint p = randomPoint();
      const auto trL = flow(s, Observable::L(), p, 2.0 * kPi, 1e-12);
      period = std::max(period, (trL.points.back().coords - p.coords).norm());
      const double tol = 1e-10;
      const auto tr = flow(s, Observable{0.3, 1.0}, p, 10.0, tol);
      const auto v0 = s.evaluate(p);
      for (const auto& q : tr.points) {
        const auto v = s.evaluate(q);
        drift = std::max(drift, std::max(std::abs(v[0] - v0[0]), std::abs(v[1] - v0[1])) / (100.0 * tol));
      }
    }
  }
  return {bracket < 1e-10 && period < 1e-8 && drift < 1.0,
          "max |{L,H}| " + fmt("%.1e", bracket) + ", L-period return " + fmt("%.1e", period) +
              ", conservation drift " + fmt("%.2f", drift) + " x 100 tol"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "transition times", 30, true, transitionTimes},
      {2, "singularity census", 60, true, census},
      {3, "height invariant", 120, true, height},
      {4, "taylor linear coefficients", 900, true, taylorLinear},
      {5, "taylor quadratic coefficients (stretch)", 300, false, taylorQuadratic},
      {6, "two-focus region map", 300, true, regionMapCheck},
      {7, "polygon and twisting group laws", 60, true, groupLaws},
      {8, "normal-form residuals", 30, true, normalForms},
      {9, "area vs return-time actions", 120, true, oracleEquivalence},
      {10, "physics plumbing", 60, true, physics},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_seconds) {
      o.pass = false;
      o.detail += "; over the time budget";
    }
    std::printf("%s %2d %s: %s (%.1f s)%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                c.gating ? "" : " [non-gating]");
    std::fflush(stdout);
    if (!o.pass && c.gating) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
