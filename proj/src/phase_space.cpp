#include "semitoric/phase_space.hpp"

#include "semitoric/errors.hpp"

#include <cmath>
#include <sstream>

namespace semitoric {

ManifoldDescriptor::ManifoldDescriptor(std::vector<FactorKind> factors, std::vector<double> weights,
                                       int global_sign)
    : factors_(std::move(factors)), weights_(std::move(weights)), sign_(global_sign) {
  if (factors_.size() != weights_.size()) {
    throw ConstraintError("manifold: factor count and weight count differ");
  }
  if (sign_ != 1 && sign_ != -1) {
    throw ConstraintError("manifold: global sign must be +1 or -1");
  }
  for (double w : weights_) {
    if (!(w > 0.0)) throw ConstraintError("manifold: weights must be strictly positive");
  }
  for (FactorKind k : factors_) {
    offsets_.push_back(ambient_dim_);
    ambient_dim_ += blockSize(k);
  }
}

Eigen::MatrixXd ManifoldDescriptor::poissonTensor(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(ambient_dim_, ambient_dim_);
  for (std::size_t f = 0; f < factors_.size(); ++f) {
    const int o = offsets_[f];
    if (factors_[f] == FactorKind::Sphere) {
      const double c = sphereBracket(f);
      const double X = x[o], Y = x[o + 1], Z = x[o + 2];
      // {x_i, x_j} = c ε_ijk x_k
      p(o, o + 1) = c * Z;
      p(o + 1, o) = -c * Z;
      p(o + 1, o + 2) = c * X;
      p(o + 2, o + 1) = -c * X;
      p(o + 2, o) = c * Y;
      p(o, o + 2) = -c * Y;
    } else {
      const double c = planeBracket(f);
      p(o, o + 1) = c;
      p(o + 1, o) = -c;
    }
  }
  return p;
}

void ManifoldDescriptor::validate(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != ambient_dim_) {
    std::ostringstream msg;
    msg << "phase point has " << x.size() << " coordinates, manifold expects " << ambient_dim_;
    throw ConstraintError(msg.str());
  }
  if (!x.allFinite()) throw ConstraintError("phase point has non-finite coordinates");
  for (std::size_t f = 0; f < factors_.size(); ++f) {
    if (factors_[f] != FactorKind::Sphere) continue;
    const double r2 = x.segment<3>(offsets_[f]).squaredNorm();
    if (std::abs(r2 - 1.0) > tol) {
      std::ostringstream msg;
      msg << "sphere factor " << f << " off the unit sphere: |x|^2 - 1 = " << r2 - 1.0;
      throw ConstraintError(msg.str());
    }
  }
}

void ManifoldDescriptor::project(Eigen::VectorXd& x) const {
  for (std::size_t f = 0; f < factors_.size(); ++f) {
    if (factors_[f] != FactorKind::Sphere) continue;
    auto block = x.segment<3>(offsets_[f]);
    block /= block.norm();
  }
}

Eigen::MatrixXd ManifoldDescriptor::tangentBasis(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(ambient_dim_, dim());
  int col = 0;
  for (std::size_t f = 0; f < factors_.size(); ++f) {
    const int o = offsets_[f];
    if (factors_[f] == FactorKind::Sphere) {
      const Eigen::Vector3d n = x.segment<3>(o).normalized();
      // pick the coordinate axis least aligned with n
      Eigen::Vector3d a = Eigen::Vector3d::Zero();
      Eigen::Index imin = 0;
      n.cwiseAbs().minCoeff(&imin);
      a[imin] = 1.0;
      const Eigen::Vector3d e1 = (a - a.dot(n) * n).normalized();
      const Eigen::Vector3d e2 = n.cross(e1);
      basis.block<3, 1>(o, col++) = e1;
      basis.block<3, 1>(o, col++) = e2;
    } else {
      basis(o, col++) = 1.0;
      basis(o + 1, col++) = 1.0;
    }
  }
  return basis;
}

Eigen::VectorXd finiteDifferenceGradient(const ScalarFunction& f, const Eigen::VectorXd& x, double step) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd y = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    y[i] = xi + 2 * step;
    const double f2p = f(y);
    y[i] = xi + step;
    const double f1p = f(y);
    y[i] = xi - step;
    const double f1m = f(y);
    y[i] = xi - 2 * step;
    const double f2m = f(y);
    y[i] = xi;
    g[i] = (-f2p + 8 * f1p - 8 * f1m + f2m) / (12 * step);
  }
  return g;
}

}  // namespace semitoric
