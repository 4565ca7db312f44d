#include "semitoric/catalog.hpp"

#include "semitoric/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace semitoric {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Both sphere-sphere families share the shape
//   L = R1 z1 + R2 z2 + l0,
//   H = a z1 + b z2 + e (x1 x2 + y1 y2) + f z1 z2 + h0.
struct SphereSphere {
  double R1, R2, l0;
  double a, b, e, f, h0;
};

SphereSphere coefficients(const CoupledAngularMomenta& s) {
  return {s.R1, s.R2, s.R2 - s.R1, 1.0 - s.t, 0.0, s.t, s.t, 2.0 * s.t - 1.0};
}

SphereSphere coefficients(const TwoFocusFamily& s) {
  const double c = s.s1 * (1.0 - s.s2);
  const double d = s.s2 * (1.0 - s.s1);
  return {s.R1, s.R2, 0.0, (1.0 - s.s1) * (1.0 - s.s2), s.s1 * s.s2, c + d, c - d, 0.0};
}

double wrapAngle(double a) {
  const double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

}  // namespace

SystemInstance::SystemInstance(Family f) : family_(f), manifold_(makeManifold(f)) {}

ManifoldDescriptor SystemInstance::makeManifold(const Family& f) {
  return std::visit(
      overloaded{
          [](const CoupledSpinOscillator& s) {
            return ManifoldDescriptor({FactorKind::Sphere, FactorKind::Plane}, {s.rho1, s.rho2}, +1);
          },
          [](const CoupledAngularMomenta& s) {
            return ManifoldDescriptor({FactorKind::Sphere, FactorKind::Sphere}, {s.R1, s.R2}, -1);
          },
          [](const TwoFocusFamily& s) {
            return ManifoldDescriptor({FactorKind::Sphere, FactorKind::Sphere}, {s.R1, s.R2}, -1);
          },
      },
      f);
}

std::string SystemInstance::familyName() const {
  return std::visit(overloaded{
                        [](const CoupledSpinOscillator&) { return std::string("cso"); },
                        [](const CoupledAngularMomenta&) { return std::string("cam"); },
                        [](const TwoFocusFamily&) { return std::string("twoff"); },
                    },
                    family_);
}

std::vector<std::pair<std::string, double>> SystemInstance::parameters() const {
  using P = std::vector<std::pair<std::string, double>>;
  return std::visit(overloaded{
                        [](const CoupledSpinOscillator& s) { return P{{"rho1", s.rho1}, {"rho2", s.rho2}}; },
                        [](const CoupledAngularMomenta& s) { return P{{"R1", s.R1}, {"R2", s.R2}, {"t", s.t}}; },
                        [](const TwoFocusFamily& s) {
                          return P{{"R1", s.R1}, {"R2", s.R2}, {"s1", s.s1}, {"s2", s.s2}};
                        },
                    },
                    family_);
}

std::array<double, 2> SystemInstance::evaluate(const PhasePoint& p) const {
  manifold_.validate(p.coords);
  const Eigen::VectorXd& x = p.coords;
  if (const auto* s = std::get_if<CoupledSpinOscillator>(&family_)) {
    const double L = s->rho1 * (x[2] - 1.0) + 0.5 * s->rho2 * (x[3] * x[3] + x[4] * x[4]);
    const double H = 0.5 * (x[0] * x[3] + x[1] * x[4]);
    return {L, H};
  }
  const SphereSphere c = std::holds_alternative<CoupledAngularMomenta>(family_)
                             ? coefficients(std::get<CoupledAngularMomenta>(family_))
                             : coefficients(std::get<TwoFocusFamily>(family_));
  const double L = c.R1 * x[2] + c.R2 * x[5] + c.l0;
  const double H = c.a * x[2] + c.b * x[5] + c.e * (x[0] * x[3] + x[1] * x[4]) + c.f * x[2] * x[5] + c.h0;
  return {L, H};
}

double SystemInstance::evaluate(Observable obs, const PhasePoint& p) const {
  const auto v = evaluate(p);
  return obs.l_coeff * v[0] + obs.h_coeff * v[1];
}

Eigen::VectorXd SystemInstance::gradient(Observable obs, const PhasePoint& p) const {
  manifold_.validate(p.coords);
  const Eigen::VectorXd& x = p.coords;
  Eigen::VectorXd gL = Eigen::VectorXd::Zero(x.size());
  Eigen::VectorXd gH = Eigen::VectorXd::Zero(x.size());
  if (const auto* s = std::get_if<CoupledSpinOscillator>(&family_)) {
    gL << 0.0, 0.0, s->rho1, s->rho2 * x[3], s->rho2 * x[4];
    gH << 0.5 * x[3], 0.5 * x[4], 0.0, 0.5 * x[0], 0.5 * x[1];
  } else {
    const SphereSphere c = std::holds_alternative<CoupledAngularMomenta>(family_)
                               ? coefficients(std::get<CoupledAngularMomenta>(family_))
                               : coefficients(std::get<TwoFocusFamily>(family_));
    gL << 0.0, 0.0, c.R1, 0.0, 0.0, c.R2;
    gH << c.e * x[3], c.e * x[4], c.a + c.f * x[5], c.e * x[0], c.e * x[1], c.b + c.f * x[2];
  }
  return obs.l_coeff * gL + obs.h_coeff * gH;
}

Eigen::MatrixXd SystemInstance::hessian(Observable obs, const PhasePoint& p) const {
  manifold_.validate(p.coords);
  const int n = manifold_.ambientDim();
  Eigen::MatrixXd hL = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd hH = Eigen::MatrixXd::Zero(n, n);
  if (const auto* s = std::get_if<CoupledSpinOscillator>(&family_)) {
    hL(3, 3) = hL(4, 4) = s->rho2;
    hH(0, 3) = hH(3, 0) = hH(1, 4) = hH(4, 1) = 0.5;
  } else {
    const SphereSphere c = std::holds_alternative<CoupledAngularMomenta>(family_)
                               ? coefficients(std::get<CoupledAngularMomenta>(family_))
                               : coefficients(std::get<TwoFocusFamily>(family_));
    hH(0, 3) = hH(3, 0) = hH(1, 4) = hH(4, 1) = c.e;
    hH(2, 5) = hH(5, 2) = c.f;
  }
  return obs.l_coeff * hL + obs.h_coeff * hH;
}

std::array<RealSeries, 2> SystemInstance::evaluateSeries(const std::vector<RealSeries>& x) const {
  if (static_cast<int>(x.size()) != manifold_.ambientDim()) {
    throw ConstraintError("series evaluation: wrong number of ambient coordinates");
  }
  if (const auto* s = std::get_if<CoupledSpinOscillator>(&family_)) {
    RealSeries L = (x[2] - 1.0) * s->rho1 + (x[3] * x[3] + x[4] * x[4]) * (0.5 * s->rho2);
    RealSeries H = (x[0] * x[3] + x[1] * x[4]) * 0.5;
    return {L, H};
  }
  const SphereSphere c = std::holds_alternative<CoupledAngularMomenta>(family_)
                             ? coefficients(std::get<CoupledAngularMomenta>(family_))
                             : coefficients(std::get<TwoFocusFamily>(family_));
  RealSeries L = x[2] * c.R1 + x[5] * c.R2 + c.l0;
  RealSeries H = x[2] * c.a + x[5] * c.b + (x[0] * x[3] + x[1] * x[4]) * c.e + x[2] * x[5] * c.f + c.h0;
  return {L, H};
}

std::vector<PhasePoint> SystemInstance::poleLattice() const {
  std::vector<PhasePoint> out;
  if (std::holds_alternative<CoupledSpinOscillator>(family_)) {
    for (double z : {1.0, -1.0}) {
      Eigen::VectorXd x(5);
      x << 0.0, 0.0, z, 0.0, 0.0;
      out.push_back({x});
    }
    return out;
  }
  for (double z1 : {1.0, -1.0}) {
    for (double z2 : {1.0, -1.0}) {
      Eigen::VectorXd x(6);
      x << 0.0, 0.0, z1, 0.0, 0.0, z2;
      out.push_back({x});
    }
  }
  return out;
}

std::pair<double, double> SystemInstance::levelRange() const {
  return std::visit(overloaded{
                        [](const CoupledSpinOscillator& s) {
                          return std::pair{-2.0 * s.rho1, std::numeric_limits<double>::infinity()};
                        },
                        [](const CoupledAngularMomenta& s) { return std::pair{-2.0 * s.R1, 2.0 * s.R2}; },
                        [](const TwoFocusFamily& s) { return std::pair{-s.R1 - s.R2, s.R1 + s.R2}; },
                    },
                    family_);
}

ReducedModel SystemInstance::reduced(double level) const {
  ReducedModel m;
  m.level = level;
  if (const auto* s = std::get_if<CoupledSpinOscillator>(&family_)) {
    const double rho1 = s->rho1, rho2 = s->rho2;
    m.z_min = -1.0;
    m.z_max = std::min(1.0, 1.0 + level / rho1);
    m.weight = rho1;
    m.a = [](double) { return 0.0; };
    m.b = [=](double z) {
      const double r2 = std::max(0.0, 2.0 * (level - rho1 * (z - 1.0)) / rho2);
      return 0.5 * std::sqrt(std::max(0.0, 1.0 - z * z) * r2);
    };
    return m;
  }
  const SphereSphere c = std::holds_alternative<CoupledAngularMomenta>(family_)
                             ? coefficients(std::get<CoupledAngularMomenta>(family_))
                             : coefficients(std::get<TwoFocusFamily>(family_));
  const double u = level - c.l0;  // R1 z1 + R2 z2 = u
  m.z_min = std::max(-1.0, (u - c.R2) / c.R1);
  m.z_max = std::min(1.0, (u + c.R2) / c.R1);
  m.weight = c.R1;
  m.a = [=](double z1) {
    const double z2 = (u - c.R1 * z1) / c.R2;
    return c.a * z1 + c.b * z2 + c.f * z1 * z2 + c.h0;
  };
  m.b = [=](double z1) {
    const double z2 = (u - c.R1 * z1) / c.R2;
    return c.e * std::sqrt(std::max(0.0, 1.0 - z1 * z1) * std::max(0.0, 1.0 - z2 * z2));
  };
  return m;
}

PhasePoint SystemInstance::liftReduced(double level, double z, double phi) const {
  const ReducedModel m = reduced(level);
  if (m.z_max < m.z_min) {
    std::ostringstream msg;
    msg << "level " << level << " is outside the image of L";
    throw RangeError(msg.str());
  }
  z = std::clamp(z, m.z_min, m.z_max);
  const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
  if (const auto* s = std::get_if<CoupledSpinOscillator>(&family_)) {
    const double r = std::sqrt(std::max(0.0, 2.0 * (level - s->rho1 * (z - 1.0)) / s->rho2));
    Eigen::VectorXd x(5);
    x << rho * std::cos(phi), rho * std::sin(phi), z, r, 0.0;
    return {x};
  }
  const SphereSphere c = std::holds_alternative<CoupledAngularMomenta>(family_)
                             ? coefficients(std::get<CoupledAngularMomenta>(family_))
                             : coefficients(std::get<TwoFocusFamily>(family_));
  const double z2 = std::clamp((level - c.l0 - c.R1 * z) / c.R2, -1.0, 1.0);
  const double rho2 = std::sqrt(std::max(0.0, 1.0 - z2 * z2));
  Eigen::VectorXd x(6);
  x << rho * std::cos(phi), rho * std::sin(phi), z, rho2, 0.0, z2;
  return {x};
}

double SystemInstance::factorAngle(const PhasePoint& p, std::size_t factor) const {
  const int o = manifold_.offset(factor);
  return std::atan2(p.coords[o + 1], p.coords[o]);
}

std::pair<double, double> SystemInstance::reducedCoordinates(const PhasePoint& p) const {
  return {p.coords[2], wrapAngle(factorAngle(p, 0) - factorAngle(p, 1))};
}

int SystemInstance::rotationSense(std::size_t) const { return -manifold_.globalSign(); }

void validateParameters(const SystemInstance& system) {
  auto positive = [](const char* name, double v) {
    if (!(std::isfinite(v) && v > 0.0)) throw PreconditionError(std::string(name) + " must be positive");
  };
  auto unit = [](const char* name, double v) {
    if (!(v >= 0.0 && v <= 1.0)) throw PreconditionError(std::string(name) + " must lie in [0, 1]");
  };
  std::visit(overloaded{
                 [&](const CoupledSpinOscillator& s) { positive("rho1", s.rho1), positive("rho2", s.rho2); },
                 [&](const CoupledAngularMomenta& s) { positive("R1", s.R1), positive("R2", s.R2), unit("t", s.t); },
                 [&](const TwoFocusFamily& s) {
                   positive("R1", s.R1), positive("R2", s.R2), unit("s1", s.s1), unit("s2", s.s2);
                 },
             },
             system.family());
}

TransitionTimes camTransitionTimes(double R1, double R2) {
  if (!(R1 > 0.0) || !(R2 > 0.0)) throw PreconditionError("transition times: weights must be positive");
  const double root = 2.0 * std::sqrt(R1 * R2);
  TransitionTimes tt;
  tt.lower = R2 / (2.0 * R2 + R1 + root);
  tt.upper = R2 / (2.0 * R2 + R1 - root);
  tt.upper_at_least_one = tt.upper >= 1.0;
  return tt;
}

double camDiscriminant(double R1, double R2, double t) {
  const double u = 1.0 - 2.0 * t;
  return -R2 * R2 * u * u + 2.0 * R1 * R2 * t - R1 * R1 * t * t;
}

double HirzebruchFacts::c() const { return 2.0 * gamma * std::sqrt(nu()); }

TransitionTimes hirzebruchTransitionTimes(HirzebruchKind kind, double alpha, double beta, double gamma) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw PreconditionError("hirzebruch: α and β must be positive");
  if (!(gamma > 0.0)) throw PreconditionError("hirzebruch: γ must be positive");
  TransitionTimes tt;
  if (kind == HirzebruchKind::W1) {
    const double g = gamma * std::sqrt(2.0 * beta);
    if (!(g < 0.5)) throw PreconditionError("hirzebruch W1: requires γ < 1/(2 sqrt(2β))");
    tt.lower = 1.0 / (2.0 * (1.0 + g));
    tt.upper = 1.0 / (2.0 * (1.0 - g));
  } else {
    const HirzebruchFacts f{2, alpha, beta, gamma};
    const double nu = f.nu();
    const double c = f.c();
    if (!(gamma < 1.0 / (2.0 * nu)) || !(c < 1.0)) {
      throw PreconditionError("hirzebruch W2: requires γ < 1/(2ν) and c < 1");
    }
    tt.lower = (1.0 + 2.0 * nu) / (1.0 + (3.0 + c) * nu);
    tt.upper = (1.0 + 2.0 * nu) / (1.0 + (3.0 - c) * nu);
  }
  tt.upper_at_least_one = tt.upper >= 1.0;
  return tt;
}

std::vector<Eigen::Vector2d> hirzebruchToricPolygon(int n, double alpha, double beta) {
  if (n < 0) throw PreconditionError("hirzebruch: n must be non-negative");
  if (!(alpha > 0.0) || !(beta > 0.0)) throw PreconditionError("hirzebruch: α and β must be positive");
  return {Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(alpha + n * beta, 0.0), Eigen::Vector2d(alpha, beta),
          Eigen::Vector2d(0.0, beta)};
}

std::vector<RealSeries> darbouxChart(const ManifoldDescriptor& m, const PhasePoint& p, int degree) {
  m.validate(p.coords, 1e-10);
  const int nf = static_cast<int>(m.factorCount());
  const int nv = 2 * nf;
  const Eigen::MatrixXd frame = m.tangentBasis(p.coords);
  std::vector<RealSeries> out(m.ambientDim(), RealSeries(nv, degree));
  for (int k = 0; k < nf; ++k) {
    const RealSeries q = RealSeries::variable(nv, degree, k);
    const RealSeries pp = RealSeries::variable(nv, degree, nf + k);
    const double w = m.weight(k);
    const int o = m.offset(k);
    if (m.kind(k) == FactorKind::Plane) {
      out[o] = q * (1.0 / std::sqrt(w)) + p.coords[o];
      out[o + 1] = pp * (m.globalSign() / std::sqrt(w)) + p.coords[o + 1];
      continue;
    }
    // X = (1 - r^2/(2w)) n + s (q e1 - σ p e2), s = sqrt(1 - r^2/(4w)) / sqrt(w)
    const Eigen::Vector3d n = p.coords.segment<3>(o);
    const Eigen::Vector3d e1 = frame.block<3, 1>(o, 2 * k);
    const Eigen::Vector3d e2 = n.cross(e1);
    const RealSeries r2 = q * q + pp * pp;
    const RealSeries s = sqrtOnePlus(r2 * (-0.25 / w)) * (1.0 / std::sqrt(w));
    const RealSeries a = q * s;
    const RealSeries b = pp * s * static_cast<double>(-m.globalSign());
    const RealSeries h = 1.0 - r2 * (0.5 / w);
    for (int i = 0; i < 3; ++i) out[o + i] = h * n[i] + a * e1[i] + b * e2[i];
  }
  return out;
}

}  // namespace semitoric
