#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace semitoric {

/// Graded table of exponent multi-indices for a fixed variable count and
/// maximum total degree. Shared between all series of the same shape.
class MonomialBasis {
 public:
  static std::shared_ptr<const MonomialBasis> get(int nvars, int max_degree);

  int nvars() const { return nvars_; }
  int maxDegree() const { return max_degree_; }
  std::size_t size() const { return exponents_.size(); }
  const std::vector<int>& exponent(std::size_t i) const { return exponents_[i]; }
  int degree(std::size_t i) const { return degrees_[i]; }
  /// Index of an exponent, or -1 if its degree exceeds the truncation.
  long indexOf(const std::vector<int>& e) const;
  /// Index of exponent(i) + unit(var), or -1 if truncated.
  long raise(std::size_t i, int var) const { return raise_[i * nvars_ + var]; }
  /// Index of exponent(i) - unit(var), or -1 if that exponent is zero.
  long lower(std::size_t i, int var) const { return lower_[i * nvars_ + var]; }
  /// Index of exponent(i) + exponent(j), or -1 if truncated.
  long add(std::size_t i, std::size_t j) const;
  /// First index of the homogeneous block of degree d (blocks are contiguous).
  std::size_t blockBegin(int d) const { return block_begin_[d]; }

 private:
  MonomialBasis(int nvars, int max_degree);

  int nvars_;
  int max_degree_;
  std::vector<std::vector<int>> exponents_;
  std::vector<int> degrees_;
  std::vector<std::size_t> block_begin_;
  std::vector<long> raise_, lower_;
  std::vector<long> sum_table_;
};

/// Multivariate polynomial truncated at a fixed total degree, dense
/// coefficients indexed by MonomialBasis. Products and compositions drop every
/// term of degree above the truncation.
template <class T>
class TruncatedSeries {
 public:
  using Scalar = T;

  TruncatedSeries() = default;
  TruncatedSeries(int nvars, int max_degree)
      : basis_(MonomialBasis::get(nvars, max_degree)), coef_(basis_->size(), T(0)) {}

  static TruncatedSeries constant(int nvars, int max_degree, T value) {
    TruncatedSeries s(nvars, max_degree);
    s.coef_[0] = value;
    return s;
  }
  static TruncatedSeries variable(int nvars, int max_degree, int var) {
    TruncatedSeries s(nvars, max_degree);
    std::vector<int> e(nvars, 0);
    e[var] = 1;
    s.coef_[s.basis_->indexOf(e)] = T(1);
    return s;
  }

  int nvars() const { return basis_->nvars(); }
  int maxDegree() const { return basis_->maxDegree(); }
  const MonomialBasis& basis() const { return *basis_; }
  std::size_t size() const { return coef_.size(); }

  T& operator[](std::size_t i) { return coef_[i]; }
  const T& operator[](std::size_t i) const { return coef_[i]; }
  T coefficient(const std::vector<int>& e) const {
    const long i = basis_->indexOf(e);
    return i < 0 ? T(0) : coef_[static_cast<std::size_t>(i)];
  }
  void setCoefficient(const std::vector<int>& e, T v) {
    const long i = basis_->indexOf(e);
    if (i >= 0) coef_[static_cast<std::size_t>(i)] = v;
  }

  TruncatedSeries& operator+=(const TruncatedSeries& o) {
    for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] += o.coef_[i];
    return *this;
  }
  TruncatedSeries& operator-=(const TruncatedSeries& o) {
    for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] -= o.coef_[i];
    return *this;
  }
  TruncatedSeries& operator*=(T s) {
    for (auto& c : coef_) c *= s;
    return *this;
  }
  TruncatedSeries& operator+=(T s) {
    coef_[0] += s;
    return *this;
  }

  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator-(TruncatedSeries a) { return a *= T(-1); }
  friend TruncatedSeries operator*(TruncatedSeries a, T s) { return a *= s; }
  friend TruncatedSeries operator*(T s, TruncatedSeries a) { return a *= s; }
  friend TruncatedSeries operator+(TruncatedSeries a, T s) { return a += s; }
  friend TruncatedSeries operator+(T s, TruncatedSeries a) { return a += s; }
  friend TruncatedSeries operator-(TruncatedSeries a, T s) { return a += -s; }
  friend TruncatedSeries operator-(T s, TruncatedSeries a) { return (a *= T(-1)) += s; }

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    TruncatedSeries r(a.nvars(), a.maxDegree());
    const MonomialBasis& B = *a.basis_;
    const int N = B.maxDegree();
    for (std::size_t i = 0; i < a.coef_.size(); ++i) {
      if (a.coef_[i] == T(0)) continue;
      const int di = B.degree(i);
      const std::size_t jend = B.blockBegin(N - di + 1);
      for (std::size_t j = 0; j < jend; ++j) {
        if (b.coef_[j] == T(0)) continue;
        r.coef_[static_cast<std::size_t>(B.add(i, j))] += a.coef_[i] * b.coef_[j];
      }
    }
    return r;
  }
  TruncatedSeries& operator*=(const TruncatedSeries& o) { return *this = *this * o; }

  /// Homogeneous part of degree d.
  TruncatedSeries homogeneous(int d) const {
    TruncatedSeries r(nvars(), maxDegree());
    if (d > maxDegree()) return r;
    for (std::size_t i = basis_->blockBegin(d); i < basis_->blockBegin(d + 1); ++i) r.coef_[i] = coef_[i];
    return r;
  }
  /// Copy with every term of degree > d dropped (same storage shape).
  TruncatedSeries truncated(int d) const {
    TruncatedSeries r = *this;
    for (std::size_t i = 0; i < coef_.size(); ++i)
      if (basis_->degree(i) > d) r.coef_[i] = T(0);
    return r;
  }
  /// Re-expresses the series in a basis of another maximum degree.
  TruncatedSeries reshaped(int max_degree) const {
    TruncatedSeries r(nvars(), max_degree);
    for (std::size_t i = 0; i < coef_.size(); ++i) {
      if (basis_->degree(i) > max_degree) continue;
      r.coef_[static_cast<std::size_t>(r.basis_->indexOf(basis_->exponent(i)))] = coef_[i];
    }
    return r;
  }

  /// ∂/∂x_var; the top-degree block of the result is zero.
  TruncatedSeries derivative(int var) const {
    TruncatedSeries r(nvars(), maxDegree());
    for (std::size_t i = 0; i < coef_.size(); ++i) {
      const int e = basis_->exponent(i)[var];
      if (e == 0 || coef_[i] == T(0)) continue;
      r.coef_[static_cast<std::size_t>(basis_->lower(i, var))] += T(e) * coef_[i];
    }
    return r;
  }

  template <class V>
  auto evaluate(const V& x) const {
    using R = decltype(T(0) * x[0]);
    R acc(0);
    for (std::size_t i = 0; i < coef_.size(); ++i) {
      if (coef_[i] == T(0)) continue;
      R term = coef_[i];
      const auto& e = basis_->exponent(i);
      for (int v = 0; v < nvars(); ++v)
        for (int k = 0; k < e[v]; ++k) term *= x[v];
      acc += term;
    }
    return acc;
  }

  /// Largest coefficient magnitude over all degrees in [dmin, dmax].
  double maxAbs(int dmin = 0, int dmax = -1) const {
    if (dmax < 0) dmax = maxDegree();
    double m = 0;
    for (std::size_t i = 0; i < coef_.size(); ++i) {
      const int d = basis_->degree(i);
      if (d >= dmin && d <= dmax) m = std::max(m, static_cast<double>(std::abs(coef_[i])));
    }
    return m;
  }

 private:
  std::shared_ptr<const MonomialBasis> basis_;
  std::vector<T> coef_;
};

using RealSeries = TruncatedSeries<double>;
using ComplexSeries = TruncatedSeries<std::complex<double>>;

/// Composition 1 / (1 + s) and sqrt(1 + s) for series s without constant term.
template <class T>
TruncatedSeries<T> inverseOnePlus(const TruncatedSeries<T>& s);
template <class T>
TruncatedSeries<T> sqrtOnePlus(const TruncatedSeries<T>& s);

/// Substitutes x_old = M x_new (M is nvars × nvars, complex or real).
template <class T, class Matrix>
TruncatedSeries<T> linearSubstitute(const TruncatedSeries<T>& s, const Matrix& M);

/// Substitutes x_v = args[v] (series in possibly different variables, all of
/// the same shape). Arguments should have no constant term unless s is a
/// polynomial of degree <= the argument truncation.
template <class T>
TruncatedSeries<T> compose(const TruncatedSeries<T>& s, const std::vector<TruncatedSeries<T>>& args);

/// Canonical bracket in (q_1..q_n, p_1..p_n) variable order:
/// {f, g} = Σ ∂f/∂q_i ∂g/∂p_i - ∂f/∂p_i ∂g/∂q_i.
RealSeries poissonBracket(const RealSeries& f, const RealSeries& g);

/// Canonical bracket written in the variables (Q, Q̄, P, P̄) with
/// Q = q1 + i q2 and P = p1 + i p2.
ComplexSeries complexPoissonBracket(const ComplexSeries& f, const ComplexSeries& g);

/// Gradient and Hessian of a series at the origin.
Eigen::VectorXd gradientAtOrigin(const RealSeries& s);
Eigen::MatrixXd hessianAtOrigin(const RealSeries& s);
/// The quadratic form x^T S x / 2 as a series with the given shape.
RealSeries quadraticSeries(const Eigen::MatrixXd& S, int max_degree);

ComplexSeries toComplex(const RealSeries& s);
/// Inverse of toComplex; throws AccuracyError if the imaginary residual exceeds tol.
RealSeries toReal(const ComplexSeries& s, double tol = 1e-10);

}  // namespace semitoric
