#include "semitoric/dynamics.hpp"

#include "semitoric/errors.hpp"

#include <cmath>

namespace semitoric {

namespace {

// ∇f for a catalog observable without the constraint check (the integrator
// visits slightly off-sphere stage points).
Eigen::VectorXd ambientGradient(const SystemInstance& system, Observable f, const Eigen::VectorXd& x) {
  Eigen::VectorXd y = x;
  system.manifold().project(y);
  Eigen::VectorXd g = system.gradient(f, PhasePoint{y});
  // gradients of the catalog observables are affine in the coordinates
  const Eigen::MatrixXd H = system.hessian(f, PhasePoint{y});
  return g + H * (x - y);
}

}  // namespace

TangentVector hamiltonianVectorField(const SystemInstance& system, Observable f, const PhasePoint& p) {
  system.manifold().validate(p.coords);
  const Eigen::VectorXd g = system.gradient(f, p);
  return {system.manifold().poissonTensor(p.coords) * g};
}

double poissonBracket(const SystemInstance& system, Observable f, Observable g, const PhasePoint& p) {
  system.manifold().validate(p.coords);
  return system.gradient(f, p).dot(system.manifold().poissonTensor(p.coords) * system.gradient(g, p));
}

DormandPrince45::Rhs vectorFieldRhs(const SystemInstance& system, Observable f) {
  return [&system, f](const Eigen::VectorXd& y, Eigen::VectorXd& dydt) {
    dydt = system.manifold().poissonTensor(y) * ambientGradient(system, f, y);
  };
}

Trajectory flow(const SystemInstance& system, Observable f, const PhasePoint& p0, double duration, double tol,
                int samples) {
  if (!(tol > 0.0)) throw PreconditionError("flow: tolerance must be positive");
  if (!(duration >= 0.0)) throw PreconditionError("flow: duration must be non-negative");
  system.manifold().validate(p0.coords);
  OdeOptions opt;
  opt.rtol = tol;
  opt.atol = tol * 1e-2;
  DormandPrince45 ode(vectorFieldRhs(system, f), opt);
  ode.reset(0.0, p0.coords);

  Trajectory tr;
  tr.times.push_back(0.0);
  tr.points.push_back(p0);
  const double dt = samples > 0 ? duration / samples : 0.0;
  int next = 1;
  while (ode.t() < duration) {
    ode.step(duration);
    if (samples > 0) {
      while (next <= samples && next * dt <= ode.t() + 1e-15 * duration) {
        Eigen::VectorXd y = next == samples ? ode.y() : ode.dense(next * dt);
        system.manifold().project(y);
        tr.times.push_back(next * dt);
        tr.points.push_back({y});
        ++next;
      }
    }
    Eigen::VectorXd y = ode.y();
    system.manifold().project(y);
    ode.setState(y);
    if (samples <= 0) {
      tr.times.push_back(ode.t());
      tr.points.push_back({y});
    }
  }
  tr.accepted_steps = ode.acceptedSteps();
  tr.rejected_steps = ode.rejectedSteps();
  return tr;
}

}  // namespace semitoric
