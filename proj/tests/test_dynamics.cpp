#include <doctest.h>

#include "semitoric/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace semitoric;

namespace {

PhasePoint randomPoint(const ManifoldDescriptor& m, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXd x(m.ambientDim());
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = g(rng);
  m.project(x);
  return {x};
}

const std::vector<SystemInstance>& systems() {
  static const std::vector<SystemInstance> s = {
      SystemInstance(CoupledSpinOscillator{1.0, 1.0}), SystemInstance(CoupledSpinOscillator{0.5, 2.0}),
      SystemInstance(CoupledAngularMomenta{1.0, 1.5, 0.5}), SystemInstance(CoupledAngularMomenta{2.0, 1.0, 0.8}),
      SystemInstance(TwoFocusFamily{1.0, 2.0, 0.3, 0.7})};
  return s;
}

}  // namespace

TEST_CASE("L and H commute everywhere") {
  std::mt19937_64 rng(1);
  for (const auto& sys : systems()) {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const PhasePoint p = randomPoint(sys.manifold(), rng);
      worst = std::max(worst, std::abs(poissonBracket(sys, Observable::L(), Observable::H(), p)));
      CHECK(poissonBracket(sys, Observable::L(), Observable::L(), p) == 0.0);
      CHECK(std::abs(poissonBracket(sys, Observable::H(), Observable::L(), p) +
                     poissonBracket(sys, Observable::L(), Observable::H(), p)) < 1e-14);
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("Leibniz rule for the ambient tensor") {
  std::mt19937_64 rng(2);
  const auto& sys = systems()[2];
  for (int i = 0; i < 100; ++i) {
    const PhasePoint p = randomPoint(sys.manifold(), rng);
    const double H = sys.evaluate(Observable::H(), p);
    const Eigen::MatrixXd P = sys.manifold().poissonTensor(p.coords);
    const Eigen::VectorXd gL = sys.gradient(Observable::L(), p);
    const Eigen::VectorXd gH2 = 2.0 * H * sys.gradient(Observable::H(), p);
    CHECK(std::abs(gL.dot(P * gH2) - 2.0 * H * poissonBracket(sys, Observable::L(), Observable::H(), p)) < 1e-10);
  }
}

TEST_CASE("vector field is tangent and vanishes at fixed points") {
  std::mt19937_64 rng(3);
  for (const auto& sys : systems()) {
    for (const auto& p : sys.poleLattice()) {
      CHECK(hamiltonianVectorField(sys, Observable::L(), p).components.norm() == 0.0);
      CHECK(hamiltonianVectorField(sys, Observable::H(), p).components.norm() < 1e-15);
    }
    for (int i = 0; i < 20; ++i) {
      const PhasePoint p = randomPoint(sys.manifold(), rng);
      const Eigen::VectorXd X = hamiltonianVectorField(sys, Observable{0.4, 1.0}, p).components;
      for (std::size_t f = 0; f < sys.manifold().factorCount(); ++f) {
        if (sys.manifold().kind(f) != FactorKind::Sphere) continue;
        const int o = sys.manifold().offset(f);
        CHECK(std::abs(X.segment<3>(o).dot(p.coords.segment<3>(o))) < 1e-12);
      }
    }
  }
}

TEST_CASE("flow of L is 2π-periodic and turns every factor the same way") {
  std::mt19937_64 rng(4);
  for (const auto& sys : systems()) {
    for (int i = 0; i < 3; ++i) {
      const PhasePoint p = randomPoint(sys.manifold(), rng);
      const auto tr = flow(sys, Observable::L(), p, 2.0 * std::numbers::pi, 1e-12, 8);
      CHECK((tr.points.back().coords - p.coords).cwiseAbs().maxCoeff() < 1e-8);
      // a quarter period turns each azimuth by rotationSense · π/2
      for (std::size_t f = 0; f < sys.manifold().factorCount(); ++f) {
        double d = sys.factorAngle(tr.points[2], f) - sys.factorAngle(p, f);
        d = std::remainder(d, 2.0 * std::numbers::pi);
        CHECK(d == doctest::Approx(sys.rotationSense(f) * std::numbers::pi / 2).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("flow conserves L, H and the sphere constraint") {
  std::mt19937_64 rng(5);
  for (const auto& sys : systems()) {
    const PhasePoint p = randomPoint(sys.manifold(), rng);
    const auto v0 = sys.evaluate(p);
    const double tol = 1e-10;
    const auto tr = flow(sys, Observable{0.3, 1.0}, p, 100.0, tol, 200);
    double drift = 0.0, sphere = 0.0;
    for (const auto& q : tr.points) {
      const auto v = sys.evaluate(q);
      drift = std::max({drift, std::abs(v[0] - v0[0]), std::abs(v[1] - v0[1])});
      for (std::size_t f = 0; f < sys.manifold().factorCount(); ++f)
        if (sys.manifold().kind(f) == FactorKind::Sphere)
          sphere = std::max(sphere, std::abs(q.sphere(sys.manifold(), f).norm() - 1.0));
    }
    CHECK(drift < 100 * tol);
    CHECK(sphere < 1e-10);
  }
}

TEST_CASE("flow from a fixed point is constant") {
  const auto& sys = systems()[2];
  const auto p = sys.poleLattice()[1];
  const auto tr = flow(sys, Observable::H(), p, 10.0, 1e-10, 5);
  for (const auto& q : tr.points) CHECK((q.coords - p.coords).norm() == 0.0);
}

TEST_CASE("step-halving study converges") {
  const auto& sys = systems()[3];
  std::mt19937_64 rng(6);
  const PhasePoint p = randomPoint(sys.manifold(), rng);
  const double H0 = sys.evaluate(Observable::H(), p);
  double prev = 1.0;
  for (double tol : {1e-6, 1e-8, 1e-10}) {
    const auto tr = flow(sys, Observable::H(), p, 100.0, tol, 1);
    const double err = std::abs(sys.evaluate(Observable::H(), tr.points.back()) - H0);
    CHECK(err < 1e-8 * (tol / 1e-10) + 1e-12);
    CHECK(err <= prev);
    prev = err;
  }
}
