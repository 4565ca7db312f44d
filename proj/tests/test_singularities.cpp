#include <doctest.h>

#include "semitoric/errors.hpp"
#include "semitoric/singularities.hpp"

#include <cmath>
#include <random>

using namespace semitoric;

namespace {

Eigen::Vector3d block(const PhasePoint& p, int o) { return p.coords.segment<3>(o); }

}  // namespace

TEST_CASE("spin-oscillator census") {
  const SystemInstance cso(CoupledSpinOscillator{1.0, 1.0});
  std::vector<std::string> diag;
  const auto pts = findRankZeroPoints(cso, {}, &diag);
  REQUIRE(pts.size() == 2);
  const auto census = countFocusFocus(cso);
  CHECK(census.n_ff == 1);
  for (const auto& r : census.records) {
    Eigen::VectorXd ff(5), ee(5);
    ff << 0, 0, 1, 0, 0;
    ee << 0, 0, -1, 0, 0;
    if (r.kind == SingularityKind::FocusFocus) CHECK((r.point.coords - ff).norm() < 1e-12);
    if (r.kind == SingularityKind::EllipticElliptic) CHECK((r.point.coords - ee).norm() < 1e-12);
    CHECK(r.pairing_residual < 1e-9);
  }
}

TEST_CASE("coupled angular momenta census follows the transition times") {
  const double R1 = 1.0, R2 = 1.5;
  const auto tt = camTransitionTimes(R1, R2);
  for (double t : {0.0, 0.1, tt.lower - 1e-6, tt.lower + 1e-6, 0.5, tt.upper - 1e-6, tt.upper + 1e-6, 1.0}) {
    const SystemInstance cam(CoupledAngularMomenta{R1, R2, t});
    const auto census = countFocusFocus(cam);
    REQUIRE(census.records.size() == 4);
    const bool inside = t > tt.lower && t < tt.upper;
    CHECK(census.n_ff == (inside ? 1 : 0));
    for (const auto& r : census.records) {
      const bool is_ff_pole = std::abs(r.point.coords[2] - 1) < 1e-12 && std::abs(r.point.coords[5] + 1) < 1e-12;
      if (is_ff_pole)
        CHECK(r.kind == (inside ? SingularityKind::FocusFocus : SingularityKind::EllipticElliptic));
      else
        CHECK(r.kind == SingularityKind::EllipticElliptic);
    }
  }
  for (double t : {tt.lower, tt.upper}) {
    const SystemInstance cam(CoupledAngularMomenta{R1, R2, t});
    Eigen::VectorXd x(6);
    x << 0, 0, 1, 0, 0, -1;
    CHECK(classify(cam, PhasePoint{x}).kind == SingularityKind::Degenerate);
  }
}

TEST_CASE("classification does not depend on the regularizer") {
  const std::vector<SystemInstance> systems = {SystemInstance(CoupledSpinOscillator{1.0, 1.0}),
                                               SystemInstance(CoupledAngularMomenta{1.0, 1.5, 0.5}),
                                               SystemInstance(CoupledAngularMomenta{1.0, 1.5, 0.1}),
                                               SystemInstance(TwoFocusFamily{1.0, 2.0, 0.5, 0.5})};
  for (const auto& s : systems) {
    for (const auto& p : s.poleLattice()) {
      const SingularityKind ref = classify(s, p).kind;
      for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        ClassifyOptions o;
        o.regularizer_seed = seed;
        CHECK(classify(s, p, o).kind == ref);
      }
    }
  }
}

TEST_CASE("decoupled two-focus corner has the pole lattice and no focus-focus point") {
  const SystemInstance tf(TwoFocusFamily{1.0, 2.0, 0.0, 0.0});
  const auto census = countFocusFocus(tf);
  CHECK(census.records.size() == 4);
  CHECK(census.n_ff == 0);
}

TEST_CASE("classify rejects regular points") {
  const SystemInstance cam(CoupledAngularMomenta{1.0, 1.5, 0.5});
  Eigen::VectorXd x(6);
  x << 1, 0, 0, 0, 0, 1;
  CHECK_THROWS_AS(classify(cam, PhasePoint{x}), PreconditionError);
}

TEST_CASE("transition scans") {
  for (auto [R1, R2] : {std::pair{1.0, 1.5}, std::pair{1.0, 1.0}}) {
    const auto tt = camTransitionTimes(R1, R2);
    const auto flips = transitionScan(
        [&](double t) { return SystemInstance(CoupledAngularMomenta{R1, R2, t}); }, 0.0, 1.0, 64);
    REQUIRE(flips.size() == 2);
    CHECK(std::abs(flips[0].value - tt.lower) < 1e-6);
    CHECK(std::abs(flips[1].value - tt.upper) < 1e-6);
  }
  const auto tt = camTransitionTimes(1.0, 2.0);
  const auto flips = transitionScan(
      [](double s1) { return SystemInstance(TwoFocusFamily{1.0, 2.0, s1, 0.0}); }, 0.0, 1.0, 32);
  REQUIRE(flips.size() == 2);
  CHECK(std::abs(flips[0].value - tt.lower) < 1e-6);
  CHECK(std::abs(flips[1].value - tt.upper) < 1e-6);
}

TEST_CASE("a grid node on the transition gives one flip") {
  // t- = 1/5 for (1, 1) is the node 40 of 200
  const auto flips = transitionScan(
      [](double t) { return SystemInstance(CoupledAngularMomenta{1.0, 1.0, t}); }, 0.0, 1.0, 200);
  REQUIRE(flips.size() == 2);
  CHECK(flips[0].value == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(flips[0].below != flips[0].above);
}

TEST_CASE("region map is deterministic across thread counts") {
  const RegionMap a = regionMap(1.0, 2.0, 12, 1);
  const RegionMap b = regionMap(1.0, 2.0, 12, 3);
  CHECK(a.counts == b.counts);
  CHECK(a.toCsv() == b.toCsv());
  CHECK(a.toSvg() == b.toSvg());
  CHECK(a.at(0, 0) == 0);
}
