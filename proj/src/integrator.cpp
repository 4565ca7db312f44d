#include "semitoric/integrator.hpp"

#include "semitoric/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace semitoric {

namespace {

// Dormand & Prince (1980) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

}  // namespace

DormandPrince45::DormandPrince45(Rhs rhs, OdeOptions options) : rhs_(std::move(rhs)), opt_(options) {}

void DormandPrince45::reset(double t0, const Eigen::VectorXd& y0) {
  t_ = t_prev_ = t0;
  y_ = y0;
  f_.resize(y0.size());
  rhs_(y_, f_);
  accepted_ = rejected_ = 0;
  h_ = opt_.initial_step > 0 ? opt_.initial_step : initialStep();
}

void DormandPrince45::setState(const Eigen::VectorXd& y) {
  y_ = y;
  rhs_(y_, f_);
}

double DormandPrince45::errorNorm(const Eigen::VectorXd& err, const Eigen::VectorXd& y0,
                                  const Eigen::VectorXd& y1) const {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = opt_.atol + opt_.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    acc += (err[i] / sc) * (err[i] / sc);
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

double DormandPrince45::initialStep() const {
  // Hairer–Wanner heuristic, first stage only.
  double d0 = 0, d1n = 0;
  for (Eigen::Index i = 0; i < y_.size(); ++i) {
    const double sc = opt_.atol + opt_.rtol * std::abs(y_[i]);
    d0 += (y_[i] / sc) * (y_[i] / sc);
    d1n += (f_[i] / sc) * (f_[i] / sc);
  }
  d0 = std::sqrt(d0 / y_.size());
  d1n = std::sqrt(d1n / y_.size());
  double h = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
  return std::min(h, opt_.max_step);
}

void DormandPrince45::step(double t_end) {
  const long n = y_.size();
  Eigen::VectorXd k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), y1(n), err(n);
  const Eigen::VectorXd& k1 = f_;
  for (;;) {
    if (accepted_ + rejected_ >= opt_.max_steps) {
      throw IntegrationError("integrator: step budget exhausted");
    }
    double h = std::min(h_, opt_.max_step);
    bool last = false;
    if (t_ + h >= t_end) {
      h = t_end - t_;
      last = true;
    }
    if (h < opt_.min_step && !last) {
      std::ostringstream msg;
      msg << "integrator: step size underflow at t = " << t_ << " (h = " << h << ")";
      throw IntegrationError(msg.str());
    }
    ytmp = y_ + h * a21 * k1;
    rhs_(ytmp, k2);
    ytmp = y_ + h * (a31 * k1 + a32 * k2);
    rhs_(ytmp, k3);
    ytmp = y_ + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs_(ytmp, k4);
    ytmp = y_ + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs_(ytmp, k5);
    ytmp = y_ + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs_(ytmp, k6);
    y1 = y_ + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    rhs_(y1, k7);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = errorNorm(err, y_, y1);
    if (!std::isfinite(en)) {
      h_ = 0.25 * h;
      ++rejected_;
      continue;
    }
    const double fac = std::clamp(0.9 * std::pow(std::max(en, 1e-16), -0.2), 0.2, 5.0);
    if (en <= 1.0) {
      r1_ = y_;
      r2_ = y1 - y_;
      r3_ = h * k1 - r2_;
      r4_ = r2_ - h * k7 - r3_;
      r5_ = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      t_prev_ = t_;
      t_ = last ? t_end : t_ + h;
      y_ = y1;
      f_ = k7;
      ++accepted_;
      if (!last) h_ = h * fac;
      return;
    }
    ++rejected_;
    h_ = h * std::min(1.0, fac);
  }
}

Eigen::VectorXd DormandPrince45::dense(double s) const {
  const double h = t_ - t_prev_;
  const double th = h > 0 ? (s - t_prev_) / h : 1.0;
  const double th1 = 1.0 - th;
  return r1_ + th * (r2_ + th1 * (r3_ + th * (r4_ + th1 * r5_)));
}

}  // namespace semitoric
