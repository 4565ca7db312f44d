#pragma once

#include "semitoric/phase_space.hpp"
#include "semitoric/series.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace semitoric {

/// Coupled spin-oscillator on S^2 x R^2, ω = ρ1 ω_S2 ⊕ ρ2 ω_R2:
///   L = ρ1 (z - 1) + ρ2/2 (u^2 + v^2),   H = (x u + y v) / 2.
struct CoupledSpinOscillator {
  double rho1 = 1.0;
  double rho2 = 1.0;
};

/// Coupled angular momenta on S^2 x S^2, ω = -(R1 ω_S2 ⊕ R2 ω_S2):
///   L = R1 (z1 - 1) + R2 (z2 + 1),
///   H = (1 - t) z1 + t (x1 x2 + y1 y2 + z1 z2) + 2t - 1.
struct CoupledAngularMomenta {
  double R1 = 1.0;
  double R2 = 1.0;
  double t = 0.5;
};

/// Two-parameter deformation of the coupled angular momenta that can carry
/// two focus-focus points:
///   L = R1 z1 + R2 z2,
///   H = (1-s1)(1-s2) z1 + s1 s2 z2 + s1 (1-s2)(x1x2 + y1y2 + z1z2)
///       + s2 (1-s1)(x1x2 + y1y2 - z1z2).
struct TwoFocusFamily {
  double R1 = 1.0;
  double R2 = 2.0;
  double s1 = 0.5;
  double s2 = 0.5;
};

/// Reduced space at a level L = l, in cylindrical coordinates (z, φ) of the
/// first factor: z ranges over [z_min, z_max], φ is the relative angle, the
/// reduced form is weight · dz ∧ dφ, and H = a(z) + b(z) cos φ.
struct ReducedModel {
  double level = 0.0;
  double z_min = 0.0;
  double z_max = 0.0;
  double weight = 1.0;
  std::function<double(double)> a;
  std::function<double(double)> b;  // may be negative; only |b| enters areas

  bool empty() const { return !(z_max > z_min); }
  /// Reduced volume divided by 2π.
  double totalAction() const { return empty() ? 0.0 : weight * (z_max - z_min); }
};

/// One catalog system with its parameters. Parameters are not checked for
/// semitoricity; degenerate values are legal inputs.
class SystemInstance {
 public:
  using Family = std::variant<CoupledSpinOscillator, CoupledAngularMomenta, TwoFocusFamily>;

  explicit SystemInstance(Family f);

  const Family& family() const { return family_; }
  /// Short family tag used by the CLI and JSON: "cso", "cam" or "twoff".
  std::string familyName() const;
  /// Named parameters in a fixed order.
  std::vector<std::pair<std::string, double>> parameters() const;

  const ManifoldDescriptor& manifold() const { return manifold_; }

  /// (L, H) at p. Throws ConstraintError for a point of the wrong manifold.
  std::array<double, 2> evaluate(const PhasePoint& p) const;
  double evaluate(Observable obs, const PhasePoint& p) const;
  /// Ambient gradients and Hessians of L and H (closed form).
  Eigen::VectorXd gradient(Observable obs, const PhasePoint& p) const;
  Eigen::MatrixXd hessian(Observable obs, const PhasePoint& p) const;

  /// (L, H) applied to ambient coordinate series.
  std::array<RealSeries, 2> evaluateSeries(const std::vector<RealSeries>& ambient) const;

  /// Candidate fixed points of the circle action (poles x plane origin).
  std::vector<PhasePoint> poleLattice() const;

  /// Closed interval of values taken by L.
  std::pair<double, double> levelRange() const;
  ReducedModel reduced(double level) const;
  /// Phase point with reduced coordinates (z, φ) on level l; the remaining
  /// angle is fixed so that the point is deterministic.
  PhasePoint liftReduced(double level, double z, double phi) const;
  /// Reduced coordinates (z, φ) of a phase point (φ in (-π, π]).
  std::pair<double, double> reducedCoordinates(const PhasePoint& p) const;
  /// Azimuth of the given factor's block (atan2 of its first two coordinates).
  double factorAngle(const PhasePoint& p, std::size_t factor) const;
  /// Sense (+1/-1) in which the flow of L turns the azimuth of a factor.
  int rotationSense(std::size_t factor) const;

 private:
  static ManifoldDescriptor makeManifold(const Family& f);

  Family family_;
  ManifoldDescriptor manifold_;
};

/// Throws PreconditionError unless weights are positive and finite and the
/// deformation parameters lie in [0, 1].
void validateParameters(const SystemInstance& system);

/// Transition times t^∓ = R2 / (2 R2 + R1 ± 2 sqrt(R1 R2)) of the coupled
/// angular momenta. flag_upper_ge_one reports t^+ >= 1.
struct TransitionTimes {
  double lower = 0.0;
  double upper = 0.0;
  bool upper_at_least_one = false;
};
TransitionTimes camTransitionTimes(double R1, double R2);

/// r_D^2 = -R2^2 (1-2t)^2 + 2 R1 R2 t - R1^2 t^2, the discriminant that is
/// positive exactly inside (t^-, t^+).
double camDiscriminant(double R1, double R2, double t);

enum class HirzebruchKind { W1, W2 };

/// Formula-level data of the Hirzebruch transition families.
struct HirzebruchFacts {
  int n = 0;
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 0.1;

  double nu() const { return beta / alpha; }
  double c() const;
};

/// Transition times of the W1 (n = 1) and W2 (n = 2) families. Throws
/// PreconditionError when γ violates the family's bound.
TransitionTimes hirzebruchTransitionTimes(HirzebruchKind kind, double alpha, double beta, double gamma);

/// Delzant polygon of (L_std, H_std) on W_n(α, β), counter-clockwise.
std::vector<Eigen::Vector2d> hirzebruchToricPolygon(int n, double alpha, double beta);

/// Ambient coordinate series of a Darboux chart centred at p: factor k
/// contributes the canonical pair (q_{k+1}, p_{k+1}); variables are ordered
/// (q1, ..., qn, p1, ..., pn).
std::vector<RealSeries> darbouxChart(const ManifoldDescriptor& m, const PhasePoint& p, int degree);

}  // namespace semitoric
