#pragma once

#include "semitoric/catalog.hpp"
#include "semitoric/integrator.hpp"
#include "semitoric/phase_space.hpp"

#include <vector>

namespace semitoric {

/// X_f(p) = P(p) ∇f(p) for f = a L + b H.
TangentVector hamiltonianVectorField(const SystemInstance& system, Observable f, const PhasePoint& p);

/// {f, g}(p) = ∇f^T P(p) ∇g.
double poissonBracket(const SystemInstance& system, Observable f, Observable g, const PhasePoint& p);

struct Trajectory {
  std::vector<double> times;
  std::vector<PhasePoint> points;
  long accepted_steps = 0;
  long rejected_steps = 0;
};

/// Integrates X_f from p0 over [0, duration] with relative tolerance tol and
/// renormalizes the sphere blocks after every accepted step. With
/// samples > 0 the trajectory holds samples + 1 equally spaced points,
/// otherwise every accepted step is recorded.
Trajectory flow(const SystemInstance& system, Observable f, const PhasePoint& p0, double duration, double tol,
                int samples = 0);

/// Right-hand side of the ambient ODE for X_f, as used by flow().
DormandPrince45::Rhs vectorFieldRhs(const SystemInstance& system, Observable f);

}  // namespace semitoric
