#pragma once

#include "semitoric/catalog.hpp"
#include "semitoric/series.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace semitoric {

/// (L - L(p), H - H(p)) in the Darboux chart of p, variables (q1, q2, p1, p2).
struct ChartExpansion {
  PhasePoint base;
  double lambda = 0.0;
  double eta = 0.0;
  RealSeries L, H;
};

/// Throws PreconditionError if a linear coefficient exceeds 1e-10 (p not rank 0).
ChartExpansion taylorExpandAtPoint(const SystemInstance& system, const PhasePoint& p, int degree);

/// Linear symplectic map y -> x = M y with L2∘M = J1 and H2∘M = α J1 + β J2,
/// β > 0, where J1 = q1 p2 - q2 p1 and J2 = q1 p1 + q2 p2.
struct FocusFocusFrame {
  Eigen::Matrix4d M = Eigen::Matrix4d::Identity();
  double alpha = 0.0;
  double beta = 0.0;
  double symplectic_residual = 0.0;  // max |M^T J M - J|
  double span_residual = 0.0;        // distance of (L2, H2)∘M from the model forms
};

/// Quadratic forms are given by their Hessians in (q1, q2, p1, p2) order.
/// Throws TypeError unless the pair has focus-focus type.
/// c is the regularizing multiple used to separate the eigenvalues.
FocusFocusFrame linearFocusFocusNormalize(const Eigen::Matrix4d& SL, const Eigen::Matrix4d& SH, double c = 0.7317);

/// Hessians of J1 and J2.
Eigen::Matrix4d hessianJ1();
Eigen::Matrix4d hessianJ2();

/// Normal form at a focus-focus value (λ, η): h = η + h(l - λ, j) and its
/// inverse j = ϱ2(l - λ, h - η), both truncated at total degree N/2.
struct EliassonMap {
  double lambda = 0.0;
  double eta = 0.0;
  int degree = 0;
  RealSeries h;     // variables (l', j), no constant term
  RealSeries rho2;  // variables (l', h'), no constant term
  double normal_form_residual = 0.0;  // largest non-normal coefficient left in H
  double round_trip_residual = 0.0;   // largest coefficient of h(l', ϱ2(l', h')) - h'
  double commutator_residual = 0.0;   // largest coefficient of {H∘Φ, J1}

  double energy(double l, double j) const;
  double eliassonJ(double l, double h) const;
  nlohmann::json toJson() const;
};

/// Lie-series normalization degree by degree; throws DegeneracyError on a
/// small divisor and PreconditionError if L is not exactly quadratic.
EliassonMap birkhoffReduce(const ChartExpansion& expansion, const FocusFocusFrame& frame, int degree);

/// Convenience: expansion, linear frame and reduction at a focus-focus point.
EliassonMap eliassonMapAt(const SystemInstance& system, const PhasePoint& p, int degree = 6,
                          double regularizer = 0.7317);

/// exp(ad_W) f = f + {f, W} + {{f, W}, W} / 2 + ... in complex variables.
ComplexSeries lieTransform(const ComplexSeries& f, const ComplexSeries& W);

}  // namespace semitoric
