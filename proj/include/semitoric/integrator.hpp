#pragma once

#include <Eigen/Dense>

#include <functional>

namespace semitoric {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0 selects a starting step automatically
  double min_step = 1e-14;
  double max_step = 0.5;
  long max_steps = 20'000'000;
};

/// Embedded Dormand–Prince 5(4) pair with the free fourth-order continuous
/// extension. Autonomous right-hand sides only.
class DormandPrince45 {
 public:
  using Rhs = std::function<void(const Eigen::VectorXd& y, Eigen::VectorXd& dydt)>;

  DormandPrince45(Rhs rhs, OdeOptions options);

  void reset(double t0, const Eigen::VectorXd& y0);

  /// Advances by one accepted step without passing t_end.
  /// Throws IntegrationError on step underflow or step-count exhaustion.
  void step(double t_end);

  /// Replaces the current state (e.g. after a projection). Keeps t.
  void setState(const Eigen::VectorXd& y);

  double t() const { return t_; }
  double tPrevious() const { return t_prev_; }
  const Eigen::VectorXd& y() const { return y_; }
  long acceptedSteps() const { return accepted_; }
  long rejectedSteps() const { return rejected_; }

  /// Dense output on the last accepted step, s in [tPrevious(), t()].
  Eigen::VectorXd dense(double s) const;

 private:
  double errorNorm(const Eigen::VectorXd& err, const Eigen::VectorXd& y0, const Eigen::VectorXd& y1) const;
  double initialStep() const;

  Rhs rhs_;
  OdeOptions opt_;
  double t_ = 0.0, t_prev_ = 0.0, h_ = 0.0;
  long accepted_ = 0, rejected_ = 0;
  Eigen::VectorXd y_, f_;
  // continuous-extension coefficients of the last step
  Eigen::VectorXd r1_, r2_, r3_, r4_, r5_;
};

}  // namespace semitoric
