#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <vector>

namespace semitoric {

enum class FactorKind { Sphere, Plane };

/// Product of unit spheres and planes carrying the weighted symplectic form
/// global_sign * (w_1 ω_1 ⊕ w_2 ω_2 ⊕ ...).
///
/// Bracket convention on a sphere factor of weight R: {x, y} = -σ z / R and
/// cyclic permutations. On a plane factor of weight ρ: {u, v} = σ / ρ.
/// With these signs the circle actions of the catalog systems turn every
/// factor in the same sense with period 2π.
class ManifoldDescriptor {
 public:
  ManifoldDescriptor(std::vector<FactorKind> factors, std::vector<double> weights, int global_sign);

  std::size_t factorCount() const { return factors_.size(); }
  FactorKind kind(std::size_t factor) const { return factors_[factor]; }
  double weight(std::size_t factor) const { return weights_[factor]; }
  int globalSign() const { return sign_; }

  /// Offset of a factor's block inside the ambient coordinate vector.
  int offset(std::size_t factor) const { return offsets_[factor]; }
  static int blockSize(FactorKind k) { return k == FactorKind::Sphere ? 3 : 2; }
  int ambientDim() const { return ambient_dim_; }
  int dim() const { return 2 * static_cast<int>(factors_.size()); }

  /// Sphere bracket constant c in {x_i, x_j} = c ε_ijk x_k.
  double sphereBracket(std::size_t factor) const { return -sign_ / weights_[factor]; }
  /// Plane bracket constant {u, v}.
  double planeBracket(std::size_t factor) const { return sign_ / weights_[factor]; }

  /// Ambient Poisson tensor P(x), so that {f, g} = ∇f^T P ∇g.
  Eigen::MatrixXd poissonTensor(const Eigen::VectorXd& x) const;

  /// Throws ConstraintError if x is not a point of the manifold within tol.
  void validate(const Eigen::VectorXd& x, double tol = 1e-12) const;
  /// Radial projection of every sphere block back onto the unit sphere.
  void project(Eigen::VectorXd& x) const;
  /// Orthonormal basis (ambientDim × dim) of the tangent space at x.
  Eigen::MatrixXd tangentBasis(const Eigen::VectorXd& x) const;

  bool operator==(const ManifoldDescriptor& other) const = default;

 private:
  std::vector<FactorKind> factors_;
  std::vector<double> weights_;
  int sign_;
  std::vector<int> offsets_;
  int ambient_dim_ = 0;
};

/// Point of a product manifold in ambient Cartesian coordinates, blocks laid
/// out as in the owning ManifoldDescriptor.
struct PhasePoint {
  Eigen::VectorXd coords;

  Eigen::Vector3d sphere(const ManifoldDescriptor& m, std::size_t factor) const {
    return coords.segment<3>(m.offset(factor));
  }
};

/// Ambient vector tangent to the manifold at some base point.
struct TangentVector {
  Eigen::VectorXd components;
};

/// The observable a L + b H.
struct Observable {
  double l_coeff = 0.0;
  double h_coeff = 0.0;

  static constexpr Observable L() { return {1.0, 0.0}; }
  static constexpr Observable H() { return {0.0, 1.0}; }
};

/// A generic smooth function of the ambient coordinates.
using ScalarFunction = std::function<double(const Eigen::VectorXd&)>;

/// Fourth-order central finite-difference gradient in ambient coordinates.
Eigen::VectorXd finiteDifferenceGradient(const ScalarFunction& f, const Eigen::VectorXd& x,
                                         double step = 1e-6);

}  // namespace semitoric
