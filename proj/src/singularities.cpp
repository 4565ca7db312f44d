#include "semitoric/singularities.hpp"

#include "semitoric/parallel.hpp"

#include "semitoric/dynamics.hpp"
#include "semitoric/errors.hpp"
#include "semitoric/svg.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

namespace semitoric {

namespace {

enum class Pattern { FocusFocus, EllipticElliptic, Collision };

Pattern spectrumPattern(const std::vector<std::complex<double>>& ev, double tol) {
  double radius = 0.0;
  for (const auto& z : ev) radius = std::max(radius, std::abs(z));
  if (radius < 1e-14) return Pattern::Collision;
  const double eps = tol * radius;
  bool all_complex = true, all_imaginary = true;
  for (const auto& z : ev) {
    const bool re0 = std::abs(z.real()) < eps;
    const bool im0 = std::abs(z.imag()) < eps;
    if (re0 || im0) all_complex = false;
    if (!re0 || im0) all_imaginary = false;
  }
  if (all_complex) return Pattern::FocusFocus;
  if (!all_imaginary) return Pattern::Collision;
  std::vector<double> w;
  for (const auto& z : ev) w.push_back(std::abs(z.imag()));
  std::sort(w.begin(), w.end());
  // two pairs ±iω1, ±iω2; a collision ω1 = ω2 is a non-generic point
  if (std::abs(w[2] - w[1]) < eps) return Pattern::Collision;
  return Pattern::EllipticElliptic;
}

double pairingResidual(const std::vector<std::complex<double>>& ev) {
  double radius = 0.0;
  for (const auto& z : ev) radius = std::max(radius, std::abs(z));
  if (radius == 0.0) return 0.0;
  double worst = 0.0;
  for (const auto& z : ev) {
    for (const auto& target : {-z, std::conj(z), -std::conj(z)}) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& w : ev) best = std::min(best, std::abs(w - target));
      worst = std::max(worst, best);
    }
  }
  return worst / radius;
}

Eigen::VectorXd rankResidual(const SystemInstance& s, const Eigen::VectorXd& x) {
  const PhasePoint p{x};
  const Eigen::MatrixXd P = s.manifold().poissonTensor(x);
  Eigen::VectorXd r(2 * x.size());
  r << P * s.gradient(Observable::L(), p), P * s.gradient(Observable::H(), p);
  return r;
}

std::vector<SingularityKind> signature(const SystemInstance& s, const RankZeroOptions& search) {
  std::vector<SingularityKind> sig;
  for (const auto& p : findRankZeroPoints(s, search)) sig.push_back(classify(s, p).kind);
  return sig;
}

int countAt(const SystemInstance& s, const RankZeroOptions& search) {
  int n = 0;
  for (const auto& p : findRankZeroPoints(s, search))
    if (classify(s, p).kind == SingularityKind::FocusFocus) ++n;
  return n;
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string kindName(SingularityKind k) {
  switch (k) {
    case SingularityKind::EllipticElliptic:
      return "elliptic-elliptic";
    case SingularityKind::FocusFocus:
      return "focus-focus";
    case SingularityKind::Degenerate:
      return "degenerate";
  }
  return "degenerate";
}

std::vector<std::complex<double>> linearizationSpectrum(const Eigen::Matrix4d& S) {
  Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
  J.block<2, 2>(0, 2) = Eigen::Matrix2d::Identity();
  J.block<2, 2>(2, 0) = -Eigen::Matrix2d::Identity();
  Eigen::EigenSolver<Eigen::Matrix4d> es(J * S, false);
  std::vector<std::complex<double>> ev(es.eigenvalues().data(), es.eigenvalues().data() + 4);
  std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return ev;
}

std::pair<Eigen::Matrix4d, Eigen::Matrix4d> chartHessians(const SystemInstance& system, const PhasePoint& p) {
  if (system.manifold().dim() != 4) throw PreconditionError("chart Hessians need a 4-dimensional phase space");
  const auto X = darbouxChart(system.manifold(), p, 2);
  const auto lh = system.evaluateSeries(X);
  return {hessianAtOrigin(lh[0]), hessianAtOrigin(lh[1])};
}

std::vector<PhasePoint> findRankZeroPoints(const SystemInstance& system, const RankZeroOptions& opt,
                                           std::vector<std::string>* diagnostics) {
  const ManifoldDescriptor& m = system.manifold();
  std::vector<Eigen::VectorXd> seeds;
  for (const auto& p : system.poleLattice()) seeds.push_back(p.coords);
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> g;
  for (int k = 0; k < opt.random_starts; ++k) {
    Eigen::VectorXd x(m.ambientDim());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = g(rng);
    m.project(x);
    seeds.push_back(x);
  }

  std::vector<PhasePoint> found;
  const double h = 1e-7;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    Eigen::VectorXd x = seeds[s];
    Eigen::VectorXd r = rankResidual(system, x);
    int it = 0;
    for (; it < opt.max_iterations && r.norm() > opt.residual_tolerance; ++it) {
      const Eigen::MatrixXd T = m.tangentBasis(x);
      Eigen::MatrixXd J(r.size(), T.cols());
      for (Eigen::Index k = 0; k < T.cols(); ++k) {
        Eigen::VectorXd xp = x + h * T.col(k), xm = x - h * T.col(k);
        m.project(xp);
        m.project(xm);
        J.col(k) = (rankResidual(system, xp) - rankResidual(system, xm)) / (2 * h);
      }
      const Eigen::VectorXd delta = J.completeOrthogonalDecomposition().solve(-r);
      double step = 1.0;
      bool improved = false;
      for (int ls = 0; ls < 30; ++ls, step *= 0.5) {
        Eigen::VectorXd y = x + step * (T * delta);
        m.project(y);
        const Eigen::VectorXd ry = rankResidual(system, y);
        if (ry.norm() < r.norm()) {
          x = y;
          r = ry;
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }
    if (r.norm() > opt.residual_tolerance) {
      if (diagnostics) {
        std::ostringstream msg;
        msg << "rank-0 search: seed " << s << " stopped after " << it << " iterations with residual " << r.norm();
        diagnostics->push_back(msg.str());
      }
      continue;
    }
    const bool dup = std::any_of(found.begin(), found.end(), [&](const PhasePoint& q) {
      return (q.coords - x).norm() < opt.merge_radius;
    });
    if (!dup) found.push_back({x});
  }
  return found;
}

SingularityRecord classify(const SystemInstance& system, const PhasePoint& p, const ClassifyOptions& opt) {
  system.manifold().validate(p.coords, 1e-10);
  const Eigen::VectorXd r = rankResidual(system, p.coords);
  if (r.cwiseAbs().maxCoeff() > 1e-8) {
    std::ostringstream msg;
    msg << "classify: point is not rank 0 (vector field magnitude " << r.cwiseAbs().maxCoeff() << ")";
    throw PreconditionError(msg.str());
  }
  SingularityRecord rec;
  rec.point = p;
  const auto v = system.evaluate(p);
  rec.lambda = v[0];
  rec.eta = v[1];
  const auto [SL, SH] = chartHessians(system, p);

  std::mt19937_64 rng(opt.regularizer_seed);
  std::uniform_real_distribution<double> cdist(0.5, 1.5);
  rec.kind = SingularityKind::Degenerate;
  for (int a = 0; a < opt.attempts; ++a) {
    const double c = cdist(rng);
    const auto ev = linearizationSpectrum(SH + c * SL);
    const Pattern pat = spectrumPattern(ev, opt.tolerance);
    if (a == 0 || pat != Pattern::Collision) {
      rec.eigen_data = ev;
      rec.regularizer = c;
      rec.pairing_residual = pairingResidual(ev);
    }
    if (pat == Pattern::FocusFocus) {
      rec.kind = SingularityKind::FocusFocus;
      break;
    }
    if (pat == Pattern::EllipticElliptic) {
      rec.kind = SingularityKind::EllipticElliptic;
      break;
    }
  }
  return rec;
}

FocusFocusCensus countFocusFocus(const SystemInstance& system, const RankZeroOptions& search,
                                 const ClassifyOptions& opt) {
  FocusFocusCensus c;
  for (const auto& p : findRankZeroPoints(system, search, &c.diagnostics)) {
    c.records.push_back(classify(system, p, opt));
    if (c.records.back().kind == SingularityKind::FocusFocus) ++c.n_ff;
  }
  return c;
}

std::vector<Transition> transitionScan(const SystemFactory& make, double from, double to, int resolution,
                                       double tol, const RankZeroOptions& search) {
  if (resolution < 16) throw PreconditionError("transition scan: resolution must be at least 16");
  if (!(to > from)) throw PreconditionError("transition scan: empty axis");
  std::vector<double> xs(resolution + 1);
  std::vector<std::vector<SingularityKind>> sig(resolution + 1);
  for (int i = 0; i <= resolution; ++i) {
    xs[i] = i == resolution ? to : from + (to - from) * i / resolution;
    sig[i] = signature(make(xs[i]), search);
  }
  std::vector<Transition> out;
  for (int i = 0; i < resolution; ++i) {
    if (sig[i] == sig[i + 1]) continue;
    double a = xs[i], b = xs[i + 1];
    while (b - a > tol) {
      const double mid = 0.5 * (a + b);
      if (signature(make(mid), search) == sig[i])
        a = mid;
      else
        b = mid;
    }
    const double x = 0.5 * (a + b);
    // a grid node sitting on the transition shows up as two flips around it
    if (!out.empty() && x - out.back().value <= 2.0 * tol) {
      out.back().value = 0.5 * (out.back().value + x);
      out.back().above = sig[i + 1];
      continue;
    }
    out.push_back({x, sig[i], sig[i + 1]});
  }
  return out;
}

RegionMap regionMap(double R1, double R2, int grid, int threads, const RankZeroOptions& search) {
  if (grid < 2) throw PreconditionError("region map: grid must be at least 2");
  RegionMap map;
  for (int k = 0; k < grid; ++k) {
    const double s = static_cast<double>(k) / (grid - 1);
    map.s1_axis.push_back(s);
    map.s2_axis.push_back(s);
  }
  const std::size_t n = static_cast<std::size_t>(grid);
  map.counts.assign(n * n, 0);
  auto system = [&](double s1, double s2) { return SystemInstance(TwoFocusFamily{R1, R2, s1, s2}); };
  detail::parallelFor(n * n, threads, [&](std::size_t idx) {
    map.counts[idx] = countAt(system(map.s1_axis[idx % n], map.s2_axis[idx / n]), search);
  });

  // refine once between disagreeing neighbours
  struct Edge {
    Eigen::Vector2d a, b;
    int left;
  };
  std::vector<Edge> edges;
  for (std::size_t i2 = 0; i2 < n; ++i2) {
    for (std::size_t i1 = 0; i1 < n; ++i1) {
      const Eigen::Vector2d here(map.s1_axis[i1], map.s2_axis[i2]);
      if (i1 + 1 < n && map.at(i1, i2) != map.at(i1 + 1, i2))
        edges.push_back({here, Eigen::Vector2d(map.s1_axis[i1 + 1], map.s2_axis[i2]), map.at(i1, i2)});
      if (i2 + 1 < n && map.at(i1, i2) != map.at(i1, i2 + 1))
        edges.push_back({here, Eigen::Vector2d(map.s1_axis[i1], map.s2_axis[i2 + 1]), map.at(i1, i2)});
    }
  }
  map.boundary.assign(edges.size(), Eigen::Vector2d::Zero());
  detail::parallelFor(edges.size(), threads, [&](std::size_t k) {
    Eigen::Vector2d a = edges[k].a, b = edges[k].b;
    for (int it = 0; it < 20; ++it) {
      const Eigen::Vector2d mid = 0.5 * (a + b);
      if (countAt(system(mid.x(), mid.y()), search) == edges[k].left)
        a = mid;
      else
        b = mid;
    }
    map.boundary[k] = 0.5 * (a + b);
  });
  return map;
}

std::string RegionMap::toCsv() const {
  std::ostringstream out;
  out << "s1,s2,n_ff\n";
  for (std::size_t i2 = 0; i2 < s2_axis.size(); ++i2)
    for (std::size_t i1 = 0; i1 < s1_axis.size(); ++i1)
      out << fmt(s1_axis[i1]) << "," << fmt(s2_axis[i2]) << "," << at(i1, i2) << "\n";
  return out.str();
}

std::string RegionMap::toSvg(int cell_pixels) const {
  const std::size_t n1 = s1_axis.size(), n2 = s2_axis.size();
  const double h1 = n1 > 1 ? (s1_axis.back() - s1_axis.front()) / (n1 - 1) : 1.0;
  const double h2 = n2 > 1 ? (s2_axis.back() - s2_axis.front()) / (n2 - 1) : 1.0;
  const Eigen::Vector2d lo(s1_axis.front() - h1 / 2, s2_axis.front() - h2 / 2);
  const Eigen::Vector2d hi(s1_axis.back() + h1 / 2, s2_axis.back() + h2 / 2);
  SvgCanvas svg(cell_pixels * n1 + 40.0, cell_pixels * n2 + 40.0, lo, hi);
  static const char* tones[] = {"#ffffff", "#c8c8c8", "#5a5a5a"};
  for (std::size_t i2 = 0; i2 < n2; ++i2) {
    for (std::size_t i1 = 0; i1 < n1; ++i1) {
      const int c = std::clamp(at(i1, i2), 0, 2);
      if (c == 0) continue;
      const Eigen::Vector2d mid(s1_axis[i1], s2_axis[i2]);
      svg.rect(mid - Eigen::Vector2d(h1 / 2, h2 / 2), mid + Eigen::Vector2d(h1 / 2, h2 / 2), tones[c]);
    }
  }
  svg.polygon({lo, {hi.x(), lo.y()}, hi, {lo.x(), hi.y()}}, "none", "black");
  return svg.str();
}

}  // namespace semitoric
