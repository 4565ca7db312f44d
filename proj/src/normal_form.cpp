#include "semitoric/normal_form.hpp"

#include "semitoric/errors.hpp"

#include <cmath>
#include <sstream>

namespace semitoric {

namespace {

using cd = std::complex<double>;

Eigen::Matrix4d symplecticJ() {
  Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
  J.block<2, 2>(0, 2) = Eigen::Matrix2d::Identity();
  J.block<2, 2>(2, 0) = -Eigen::Matrix2d::Identity();
  return J;
}

bool resonant(const std::vector<int>& e) { return e[0] == e[3] && e[1] == e[2]; }

// eigenvalue of {., α J1 + β J2} on the monomial Q^a Qb^b P^c Pb^d
cd homologicalEigenvalue(const std::vector<int>& e, double alpha, double beta) {
  const int r1 = e[0] - e[1] + e[2] - e[3];
  const int r2 = e[0] + e[1] - e[2] - e[3];
  return cd(beta * r2, alpha * r1);
}

}  // namespace

Eigen::Matrix4d hessianJ1() {
  Eigen::Matrix4d S = Eigen::Matrix4d::Zero();
  S(0, 3) = S(3, 0) = 1.0;
  S(1, 2) = S(2, 1) = -1.0;
  return S;
}

Eigen::Matrix4d hessianJ2() {
  Eigen::Matrix4d S = Eigen::Matrix4d::Zero();
  S(0, 2) = S(2, 0) = 1.0;
  S(1, 3) = S(3, 1) = 1.0;
  return S;
}

ChartExpansion taylorExpandAtPoint(const SystemInstance& system, const PhasePoint& p, int degree) {
  if (degree < 2) throw PreconditionError("taylor expansion: degree must be at least 2");
  if (system.manifold().dim() != 4) throw PreconditionError("taylor expansion: 4-dimensional systems only");
  const auto X = darbouxChart(system.manifold(), p, degree);
  auto lh = system.evaluateSeries(X);
  ChartExpansion ex;
  ex.base = p;
  ex.lambda = lh[0][0];
  ex.eta = lh[1][0];
  lh[0][0] = 0.0;
  lh[1][0] = 0.0;
  const double lin = std::max(lh[0].maxAbs(1, 1), lh[1].maxAbs(1, 1));
  if (lin > 1e-10) {
    std::ostringstream msg;
    msg << "taylor expansion: linear terms of size " << lin << " (point is not rank 0)";
    throw PreconditionError(msg.str());
  }
  ex.L = lh[0];
  ex.H = lh[1];
  return ex;
}

FocusFocusFrame linearFocusFocusNormalize(const Eigen::Matrix4d& SL, const Eigen::Matrix4d& SH, double c) {
  const Eigen::Matrix4d J = symplecticJ();
  const Eigen::Matrix4d AL = J * SL;
  // A_H + c A_L has simple eigenvalues ±β ± i(α + c) for generic c
  Eigen::EigenSolver<Eigen::Matrix4d> es(J * (SH + c * SL));
  const auto& ev = es.eigenvalues();
  double radius = 0.0;
  for (int i = 0; i < 4; ++i) radius = std::max(radius, std::abs(ev[i]));
  int plus = -1, minus = -1;
  for (int i = 0; i < 4; ++i) {
    if (std::abs(ev[i].real()) < 1e-7 * radius || std::abs(ev[i].imag()) < 1e-7 * radius) {
      throw TypeError("focus-focus normalization: spectrum is not of focus-focus type");
    }
    if (ev[i].real() > 0 && ev[i].imag() > 0) plus = i;
    if (ev[i].real() < 0 && ev[i].imag() > 0) minus = i;
  }
  if (plus < 0 || minus < 0) throw TypeError("focus-focus normalization: spectrum is not of focus-focus type");

  const Eigen::Vector4cd vp = es.eigenvectors().col(plus);
  const Eigen::Vector4cd vm = es.eigenvectors().col(minus);
  const Eigen::Vector4d re = vp.real(), im = vp.imag();
  // canonical representative in E+: second component zero, first positive, unit length
  Eigen::Vector4d e1 = im[1] * re - re[1] * im;
  if (e1.norm() < 1e-12 * (re.norm() + im.norm())) e1 = re;
  e1.normalize();
  for (int k = 0; k < 4; ++k) {
    if (std::abs(e1[k]) > 1e-12) {
      if (e1[k] < 0) e1 = -e1;
      break;
    }
  }
  const Eigen::Vector4d e2 = AL * e1;
  Eigen::Matrix<double, 4, 2> E, Em;
  E << e1, e2;
  Em << vm.real(), vm.imag();
  const Eigen::Matrix2d G = E.transpose() * J * Em;
  const Eigen::Matrix<double, 4, 2> F = Em * G.inverse();

  FocusFocusFrame fr;
  fr.M << E, F;
  fr.symplectic_residual = (fr.M.transpose() * J * fr.M - J).cwiseAbs().maxCoeff();
  Eigen::Matrix4d SHn = fr.M.transpose() * SH * fr.M;
  fr.alpha = SHn(0, 3);
  fr.beta = SHn(0, 2);
  if (fr.beta < 0) {
    // (q, p) -> (p, -q) keeps J1 and flips J2
    Eigen::Matrix4d R = Eigen::Matrix4d::Zero();
    R.block<2, 2>(0, 2) = Eigen::Matrix2d::Identity();
    R.block<2, 2>(2, 0) = -Eigen::Matrix2d::Identity();
    fr.M = fr.M * R;
    SHn = fr.M.transpose() * SH * fr.M;
    fr.alpha = SHn(0, 3);
    fr.beta = SHn(0, 2);
  }
  const Eigen::Matrix4d SLn = fr.M.transpose() * SL * fr.M;
  fr.span_residual = std::max((SLn - hessianJ1()).cwiseAbs().maxCoeff(),
                              (SHn - fr.alpha * hessianJ1() - fr.beta * hessianJ2()).cwiseAbs().maxCoeff());
  return fr;
}

ComplexSeries lieTransform(const ComplexSeries& f, const ComplexSeries& W) {
  ComplexSeries result = f;
  ComplexSeries term = f;
  for (int n = 1; n <= 2 * f.maxDegree() + 2; ++n) {
    term = complexPoissonBracket(term, W) * cd(1.0 / n);
    if (term.maxAbs() == 0.0) break;
    result += term;
  }
  return result;
}

double EliassonMap::energy(double l, double j) const {
  const double x[2] = {l - lambda, j};
  return eta + h.evaluate(x);
}

double EliassonMap::eliassonJ(double l, double hval) const {
  const double x[2] = {l - lambda, hval - eta};
  return rho2.evaluate(x);
}

nlohmann::json EliassonMap::toJson() const {
  auto coeffs = [](const RealSeries& s, const char* v0, const char* v1) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == 0.0) continue;
      const auto& e = s.basis().exponent(i);
      arr.push_back({{v0, e[0]}, {v1, e[1]}, {"c", s[i]}});
    }
    return arr;
  };
  return {{"lambda", lambda},
          {"eta", eta},
          {"degree", degree},
          {"h", coeffs(h, "l", "j")},
          {"rho2", coeffs(rho2, "l", "h")},
          {"normal_form_residual", normal_form_residual},
          {"round_trip_residual", round_trip_residual}};
}

EliassonMap birkhoffReduce(const ChartExpansion& ex, const FocusFocusFrame& frame, int degree) {
  if (degree < 2 || degree > ex.H.maxDegree()) throw PreconditionError("birkhoff: degree out of range");
  if (ex.L.maxAbs(3, ex.L.maxDegree()) > 1e-10) {
    throw PreconditionError("birkhoff: L must be exactly quadratic in the chart");
  }
  if (!(frame.beta > 0)) throw PreconditionError("birkhoff: frame must have β > 0");
  const int N = degree;
  const RealSeries Hn = linearSubstitute(ex.H.reshaped(N), frame.M);
  ComplexSeries Hc = toComplex(Hn);

  const double a = frame.alpha, b = frame.beta;
  for (int k = 3; k <= N; ++k) {
    const MonomialBasis& B = Hc.basis();
    ComplexSeries W(4, N);
    bool any = false;
    for (std::size_t i = B.blockBegin(k); i < B.blockBegin(k + 1); ++i) {
      if (Hc[i] == cd(0) || resonant(B.exponent(i))) continue;
      const cd lam = homologicalEigenvalue(B.exponent(i), a, b);
      if (std::abs(lam) < 1e-12) {
        // terms not invariant under J1 are rounding noise since {H, L} = 0
        if (std::abs(Hc[i]) < 1e-12) {
          Hc[i] = 0.0;
          continue;
        }
        std::ostringstream msg;
        msg << "birkhoff: small divisor " << std::abs(lam) << " at degree " << k;
        throw DegeneracyError(msg.str());
      }
      W[i] = Hc[i] / lam;
      any = true;
    }
    if (any) Hc = lieTransform(Hc, W);
  }

  EliassonMap em;
  em.lambda = ex.lambda;
  em.eta = ex.eta;
  em.degree = N;
  {
    const MonomialBasis& B = Hc.basis();
    for (std::size_t i = 0; i < Hc.size(); ++i)
      if (!resonant(B.exponent(i))) em.normal_form_residual = std::max(em.normal_form_residual, std::abs(Hc[i]));
    ComplexSeries J1c(4, N);
    // J1 = (Qb P - Q Pb) / (2i)
    J1c.setCoefficient({0, 1, 1, 0}, cd(0, -0.5));
    J1c.setCoefficient({1, 0, 0, 1}, cd(0, 0.5));
    em.commutator_residual = complexPoissonBracket(Hc, J1c).maxAbs();
  }

  // h(l', j): Q Pb = j - i l', Qb P = j + i l'
  const int K = N / 2;
  using CS = ComplexSeries;
  const CS A = CS::variable(2, K, 1) - CS::variable(2, K, 0) * cd(0, 1);
  const CS Bv = CS::variable(2, K, 1) + CS::variable(2, K, 0) * cd(0, 1);
  CS hc(2, K);
  for (int p = 0; p <= K; ++p) {
    for (int q = 0; p + q <= K; ++q) {
      const cd coef = Hc.coefficient({p, q, q, p});
      if (coef == cd(0)) continue;
      CS term = CS::constant(2, K, coef);
      for (int r = 0; r < p; ++r) term = term * A;
      for (int r = 0; r < q; ++r) term = term * Bv;
      hc += term;
    }
  }
  em.h = RealSeries(2, K);
  double imag = 0.0;
  for (std::size_t i = 0; i < hc.size(); ++i) {
    em.h[i] = hc[i].real();
    imag = std::max(imag, std::abs(hc[i].imag()));
  }
  em.h[0] = 0.0;
  if (imag > 1e-9) {
    std::ostringstream msg;
    msg << "birkhoff: normal form has imaginary residue " << imag;
    throw AccuracyError(msg.str());
  }

  // j = (h' - α l' - R(l', j)) / β
  const RealSeries lp = RealSeries::variable(2, K, 0);
  const RealSeries hp = RealSeries::variable(2, K, 1);
  RealSeries R = em.h;
  R.setCoefficient({1, 0}, 0.0);
  R.setCoefficient({0, 1}, 0.0);
  const double alpha_h = em.h.coefficient({1, 0});
  const double beta_h = em.h.coefficient({0, 1});
  RealSeries j = (hp - lp * alpha_h) * (1.0 / beta_h);
  for (int it = 0; it < K + 1; ++it) j = (hp - lp * alpha_h - compose(R, {lp, j})) * (1.0 / beta_h);
  em.rho2 = j;
  em.round_trip_residual = (compose(em.h, {lp, em.rho2}) - hp).maxAbs();
  return em;
}

EliassonMap eliassonMapAt(const SystemInstance& system, const PhasePoint& p, int degree, double regularizer) {
  const ChartExpansion ex = taylorExpandAtPoint(system, p, degree);
  const FocusFocusFrame fr = linearFocusFocusNormalize(hessianAtOrigin(ex.L), hessianAtOrigin(ex.H), regularizer);
  return birkhoffReduce(ex, fr, degree);
}

}  // namespace semitoric
