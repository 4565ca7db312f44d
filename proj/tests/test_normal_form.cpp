#include <doctest.h>

#include "semitoric/errors.hpp"
#include "semitoric/normal_form.hpp"

#include <cmath>
#include <random>

using namespace semitoric;

namespace {

PhasePoint pole(double z1, double z2) {
  Eigen::VectorXd x(6);
  x << 0, 0, z1, 0, 0, z2;
  return {x};
}

ComplexSeries randomComplex(std::mt19937_64& rng, int deg, int lo, int hi) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexSeries s(4, deg);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const int d = s.basis().degree(i);
    if (d >= lo && d <= hi) s[i] = {u(rng), u(rng)};
  }
  return s;
}

}  // namespace

TEST_CASE("model pair gives the identity frame") {
  const auto fr = linearFocusFocusNormalize(hessianJ1(), hessianJ2());
  CHECK((fr.M - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(fr.alpha == doctest::Approx(0.0));
  CHECK(fr.beta == doctest::Approx(1.0));
}

TEST_CASE("linear combination is recovered") {
  const auto fr = linearFocusFocusNormalize(hessianJ1(), hessianJ1() + 2.0 * hessianJ2());
  CHECK(fr.alpha == doctest::Approx(1.0));
  CHECK(fr.beta == doctest::Approx(2.0));
  CHECK(fr.span_residual < 1e-12);
}

TEST_CASE("catalog focus-focus frames") {
  const SystemInstance cso(CoupledSpinOscillator{1.0, 1.0});
  const auto ex = taylorExpandAtPoint(cso, cso.poleLattice()[0], 2);
  const auto fr = linearFocusFocusNormalize(hessianAtOrigin(ex.L), hessianAtOrigin(ex.H));
  CHECK(fr.symplectic_residual < 1e-10);
  CHECK(fr.span_residual < 1e-9);
  CHECK(fr.beta > 0.1);

  const double R1 = 1, R2 = 2, t = 0.5;
  const SystemInstance cam(CoupledAngularMomenta{R1, R2, t});
  const auto ex2 = taylorExpandAtPoint(cam, pole(1, -1), 2);
  const auto fr2 = linearFocusFocusNormalize(hessianAtOrigin(ex2.L), hessianAtOrigin(ex2.H));
  const double rD = std::sqrt(camDiscriminant(R1, R2, t));
  CHECK(fr2.symplectic_residual < 1e-10);
  CHECK(fr2.beta == doctest::Approx(rD / 4).epsilon(1e-12));
  CHECK(fr2.alpha == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("elliptic points are rejected") {
  const SystemInstance cso(CoupledSpinOscillator{1.0, 1.0});
  const auto ex = taylorExpandAtPoint(cso, cso.poleLattice()[1], 2);
  CHECK_THROWS_AS(linearFocusFocusNormalize(hessianAtOrigin(ex.L), hessianAtOrigin(ex.H)), TypeError);
}

TEST_CASE("regular points are rejected by the expansion") {
  const SystemInstance cam(CoupledAngularMomenta{1.0, 1.5, 0.5});
  Eigen::VectorXd x(6);
  x << 1, 0, 0, 0, 0, 1;
  CHECK_THROWS_AS(taylorExpandAtPoint(cam, PhasePoint{x}, 4), PreconditionError);
}

TEST_CASE("L is quadratic in the chart at the focus-focus pole") {
  const SystemInstance cam(CoupledAngularMomenta{1.0, 2.0, 0.5});
  const auto ex = taylorExpandAtPoint(cam, pole(1, -1), 8);
  CHECK(ex.L.maxAbs(3, 8) < 1e-12);
}

TEST_CASE("monomials diagonalize the bracket with the quadratic model") {
  const double alpha = 0.3, beta = 0.7;
  const ComplexSeries H2 = toComplex(quadraticSeries(alpha * hessianJ1() + beta * hessianJ2(), 5));
  const auto B = MonomialBasis::get(4, 5);
  for (std::size_t i = 0; i < B->size(); ++i) {
    const auto& e = B->exponent(i);
    ComplexSeries m(4, 5);
    m[i] = 1.0;
    const ComplexSeries br = complexPoissonBracket(m, H2);
    const std::complex<double> lam(beta * (e[0] + e[1] - e[2] - e[3]), alpha * (e[0] - e[1] + e[2] - e[3]));
    CHECK((br - m * lam).maxAbs() < 1e-14);
  }
}

TEST_CASE("Lie transform preserves brackets up to truncation") {
  std::mt19937_64 rng(17);
  const int N = 8;
  const ComplexSeries W = randomComplex(rng, N, 3, 3) * std::complex<double>(0.1);
  const ComplexSeries f = randomComplex(rng, N, 2, 3);
  const ComplexSeries g = randomComplex(rng, N, 2, 3);
  const ComplexSeries lhs = complexPoissonBracket(lieTransform(f, W), lieTransform(g, W));
  const ComplexSeries rhs = lieTransform(complexPoissonBracket(f, g), W);
  // terms of degree <= N - 2 are unaffected by the truncation
  double worst = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i)
    if (lhs.basis().degree(i) <= N - 2) worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
  CHECK(worst < 1e-9);
}

TEST_CASE("normal form of an integrable model is the identity") {
  ChartExpansion ex;
  const int N = 6;
  const RealSeries J1 = quadraticSeries(hessianJ1(), N);
  const RealSeries J2 = quadraticSeries(hessianJ2(), N);
  ex.L = J1;
  ex.H = J1 * 0.2 + J2 * 0.9 + J2 * J2 * 0.3 - J1 * J2 * 0.1 + J2 * J2 * J2 * 0.05;
  const auto fr = linearFocusFocusNormalize(hessianAtOrigin(ex.L), hessianAtOrigin(ex.H));
  const auto em = birkhoffReduce(ex, fr, N);
  CHECK(em.h.coefficient({1, 0}) == doctest::Approx(0.2));
  CHECK(em.h.coefficient({0, 1}) == doctest::Approx(0.9));
  CHECK(em.h.coefficient({0, 2}) == doctest::Approx(0.3));
  CHECK(em.h.coefficient({1, 1}) == doctest::Approx(-0.1));
  CHECK(em.h.coefficient({0, 3}) == doctest::Approx(0.05));
  CHECK(em.normal_form_residual < 1e-14);
}

TEST_CASE("degree-6 reduction at the catalog focus-focus points") {
  const std::vector<std::pair<SystemInstance, PhasePoint>> cases = {
      {SystemInstance(CoupledSpinOscillator{1.0, 1.0}), SystemInstance(CoupledSpinOscillator{1.0, 1.0}).poleLattice()[0]},
      {SystemInstance(CoupledAngularMomenta{1.0, 2.0, 0.5}), pole(1, -1)},
      {SystemInstance(CoupledAngularMomenta{1.0, 1.5, 0.4}), pole(1, -1)}};
  for (const auto& [sys, p] : cases) {
    const auto a = eliassonMapAt(sys, p, 6, 0.7317);
    CHECK(a.normal_form_residual < 1e-9);
    CHECK(a.round_trip_residual < 1e-9);
    CHECK(a.commutator_residual < 1e-9);
    CHECK(a.rho2.coefficient({0, 1}) > 0.0);
    const auto b = eliassonMapAt(sys, p, 6, 1.91);
    CHECK((a.rho2 - b.rho2).maxAbs() < 1e-8);
    const double j = a.eliassonJ(a.lambda + 0.01, a.eta + 0.02);
    CHECK(std::abs(a.energy(a.lambda + 0.01, j) - (a.eta + 0.02)) < 1e-6);
  }
}
