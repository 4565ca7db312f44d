#include "semitoric/series.hpp"

#include "semitoric/errors.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace semitoric {

namespace {

void enumerate(int nvars, int degree, int var, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (var == nvars - 1) {
    cur[var] = degree;
    out.push_back(cur);
    return;
  }
  for (int k = degree; k >= 0; --k) {
    cur[var] = k;
    enumerate(nvars, degree - k, var + 1, cur, out);
  }
}

}  // namespace

std::shared_ptr<const MonomialBasis> MonomialBasis::get(int nvars, int max_degree) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{nvars, max_degree}];
  if (!slot) slot.reset(new MonomialBasis(nvars, max_degree));
  return slot;
}

MonomialBasis::MonomialBasis(int nvars, int max_degree) : nvars_(nvars), max_degree_(max_degree) {
  if (nvars < 1 || max_degree < 0) throw PreconditionError("series: bad shape");
  std::vector<int> cur(nvars, 0);
  for (int d = 0; d <= max_degree; ++d) {
    block_begin_.push_back(exponents_.size());
    enumerate(nvars, d, 0, cur, exponents_);
  }
  block_begin_.push_back(exponents_.size());
  for (const auto& e : exponents_) {
    int d = 0;
    for (int x : e) d += x;
    degrees_.push_back(d);
  }
  const std::size_t n = exponents_.size();
  raise_.assign(n * nvars, -1);
  lower_.assign(n * nvars, -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (int v = 0; v < nvars; ++v) {
      std::vector<int> e = exponents_[i];
      e[v] += 1;
      raise_[i * nvars + v] = indexOf(e);
      e[v] -= 2;
      if (e[v] >= 0) lower_[i * nvars + v] = indexOf(e);
    }
  }
  sum_table_.assign(n * n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (degrees_[i] + degrees_[j] > max_degree) continue;
      std::vector<int> e = exponents_[i];
      for (int v = 0; v < nvars; ++v) e[v] += exponents_[j][v];
      sum_table_[i * n + j] = indexOf(e);
    }
  }
}

long MonomialBasis::indexOf(const std::vector<int>& e) const {
  int d = 0;
  for (int x : e) d += x;
  if (d > max_degree_) return -1;
  // rank inside the degree block: exponents are enumerated with the first
  // variable descending, then recursively on the remaining variables
  long rank = 0;
  int remaining = d;
  for (int v = 0; v < nvars_ - 1; ++v) {
    // number of exponents of the tail (nvars - v - 1 vars) with first entry > e[v]
    for (int k = remaining; k > e[v]; --k) {
      // count compositions of (remaining - k) into (nvars - v - 1) parts
      const int parts = nvars_ - v - 1;
      const int total = remaining - k;
      // C(total + parts - 1, parts - 1)
      long c = 1;
      for (int i = 1; i <= parts - 1; ++i) c = c * (total + i) / i;
      rank += c;
    }
    remaining -= e[v];
  }
  return static_cast<long>(block_begin_[d]) + rank;
}

long MonomialBasis::add(std::size_t i, std::size_t j) const { return sum_table_[i * exponents_.size() + j]; }

template <class T>
TruncatedSeries<T> inverseOnePlus(const TruncatedSeries<T>& s) {
  // 1 - s + s^2 - ...
  TruncatedSeries<T> result = TruncatedSeries<T>::constant(s.nvars(), s.maxDegree(), T(1));
  TruncatedSeries<T> power = result;
  for (int k = 1; k <= s.maxDegree(); ++k) {
    power = power * s * T(-1);
    result += power;
  }
  return result;
}

template <class T>
TruncatedSeries<T> sqrtOnePlus(const TruncatedSeries<T>& s) {
  TruncatedSeries<T> result = TruncatedSeries<T>::constant(s.nvars(), s.maxDegree(), T(1));
  TruncatedSeries<T> power = result;
  double binom = 1.0;  // C(1/2, k)
  for (int k = 1; k <= s.maxDegree(); ++k) {
    binom *= (0.5 - (k - 1)) / k;
    power = power * s;
    result += power * T(binom);
  }
  return result;
}

template <class T, class Matrix>
TruncatedSeries<T> linearSubstitute(const TruncatedSeries<T>& s, const Matrix& M) {
  const int n = s.nvars();
  const int N = s.maxDegree();
  // powers[v][k] = (Σ_w M(v,w) x_w)^k
  std::vector<std::vector<TruncatedSeries<T>>> powers(n);
  for (int v = 0; v < n; ++v) {
    TruncatedSeries<T> lin(n, N);
    for (int w = 0; w < n; ++w) lin += TruncatedSeries<T>::variable(n, N, w) * T(M(v, w));
    powers[v].push_back(TruncatedSeries<T>::constant(n, N, T(1)));
    for (int k = 1; k <= N; ++k) powers[v].push_back(powers[v].back() * lin);
  }
  TruncatedSeries<T> result(n, N);
  const MonomialBasis& B = s.basis();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == T(0)) continue;
    const auto& e = B.exponent(i);
    TruncatedSeries<T> term = TruncatedSeries<T>::constant(n, N, s[i]);
    for (int v = 0; v < n; ++v)
      if (e[v] > 0) term = term * powers[v][e[v]];
    result += term;
  }
  return result;
}

template <class T>
TruncatedSeries<T> compose(const TruncatedSeries<T>& s, const std::vector<TruncatedSeries<T>>& args) {
  if (static_cast<int>(args.size()) != s.nvars()) throw PreconditionError("compose: argument count mismatch");
  const int n = args.front().nvars();
  const int N = args.front().maxDegree();
  std::vector<std::vector<TruncatedSeries<T>>> powers(args.size());
  for (std::size_t v = 0; v < args.size(); ++v) {
    powers[v].push_back(TruncatedSeries<T>::constant(n, N, T(1)));
    for (int k = 1; k <= s.maxDegree(); ++k) powers[v].push_back(powers[v].back() * args[v]);
  }
  TruncatedSeries<T> result(n, N);
  const MonomialBasis& B = s.basis();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == T(0)) continue;
    const auto& e = B.exponent(i);
    TruncatedSeries<T> term = TruncatedSeries<T>::constant(n, N, s[i]);
    for (int v = 0; v < s.nvars(); ++v)
      if (e[v] > 0) term = term * powers[v][e[v]];
    result += term;
  }
  return result;
}

RealSeries poissonBracket(const RealSeries& f, const RealSeries& g) {
  const int n = f.nvars() / 2;
  RealSeries r(f.nvars(), f.maxDegree());
  for (int i = 0; i < n; ++i) {
    r += f.derivative(i) * g.derivative(n + i);
    r -= f.derivative(n + i) * g.derivative(i);
  }
  return r;
}

ComplexSeries complexPoissonBracket(const ComplexSeries& f, const ComplexSeries& g) {
  // variables (Q, Qb, P, Pb); {Q, Pb} = {Qb, P} = 2
  enum { Q = 0, Qb = 1, P = 2, Pb = 3 };
  ComplexSeries r = f.derivative(Q) * g.derivative(Pb);
  r += f.derivative(Qb) * g.derivative(P);
  r -= f.derivative(Pb) * g.derivative(Q);
  r -= f.derivative(P) * g.derivative(Qb);
  return r * std::complex<double>(2.0);
}

Eigen::VectorXd gradientAtOrigin(const RealSeries& s) {
  Eigen::VectorXd g(s.nvars());
  for (int i = 0; i < s.nvars(); ++i) {
    std::vector<int> e(s.nvars(), 0);
    e[i] = 1;
    g[i] = s.coefficient(e);
  }
  return g;
}

Eigen::MatrixXd hessianAtOrigin(const RealSeries& s) {
  const int n = s.nvars();
  Eigen::MatrixXd H(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::vector<int> e(n, 0);
      e[i] += 1;
      e[j] += 1;
      H(i, j) = (i == j ? 2.0 : 1.0) * s.coefficient(e);
    }
  }
  return H;
}

RealSeries quadraticSeries(const Eigen::MatrixXd& S, int max_degree) {
  const int n = static_cast<int>(S.rows());
  RealSeries r(n, max_degree);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      std::vector<int> e(n, 0);
      e[i] += 1;
      e[j] += 1;
      r.setCoefficient(e, i == j ? 0.5 * S(i, i) : 0.5 * (S(i, j) + S(j, i)));
    }
  }
  return r;
}

ComplexSeries toComplex(const RealSeries& s) {
  using C = std::complex<double>;
  const C I(0, 1);
  Eigen::Matrix4cd M = Eigen::Matrix4cd::Zero();
  // (q1, q2, p1, p2) in terms of (Q, Qb, P, Pb)
  M(0, 0) = 0.5;
  M(0, 1) = 0.5;
  M(1, 0) = -0.5 * I;
  M(1, 1) = 0.5 * I;
  M(2, 2) = 0.5;
  M(2, 3) = 0.5;
  M(3, 2) = -0.5 * I;
  M(3, 3) = 0.5 * I;
  ComplexSeries c(s.nvars(), s.maxDegree());
  for (std::size_t i = 0; i < s.size(); ++i) c[i] = s[i];
  return linearSubstitute(c, M);
}

RealSeries toReal(const ComplexSeries& s, double tol) {
  using C = std::complex<double>;
  const C I(0, 1);
  Eigen::Matrix4cd M = Eigen::Matrix4cd::Zero();
  // (Q, Qb, P, Pb) in terms of (q1, q2, p1, p2)
  M(0, 0) = 1.0;
  M(0, 1) = I;
  M(1, 0) = 1.0;
  M(1, 1) = -I;
  M(2, 2) = 1.0;
  M(2, 3) = I;
  M(3, 2) = 1.0;
  M(3, 3) = -I;
  const ComplexSeries c = linearSubstitute(s, M);
  RealSeries r(s.nvars(), s.maxDegree());
  double worst = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    r[i] = c[i].real();
    worst = std::max(worst, std::abs(c[i].imag()));
  }
  if (worst > tol) {
    std::ostringstream msg;
    msg << "series: imaginary residual " << worst << " exceeds " << tol;
    throw AccuracyError(msg.str());
  }
  return r;
}

template RealSeries inverseOnePlus(const RealSeries&);
template ComplexSeries inverseOnePlus(const ComplexSeries&);
template RealSeries sqrtOnePlus(const RealSeries&);
template ComplexSeries sqrtOnePlus(const ComplexSeries&);
template RealSeries compose(const RealSeries&, const std::vector<RealSeries>&);
template ComplexSeries compose(const ComplexSeries&, const std::vector<ComplexSeries>&);
template RealSeries linearSubstitute(const RealSeries&, const Eigen::MatrixXd&);
template RealSeries linearSubstitute(const RealSeries&, const Eigen::Matrix4d&);
template ComplexSeries linearSubstitute(const ComplexSeries&, const Eigen::MatrixXcd&);
template ComplexSeries linearSubstitute(const ComplexSeries&, const Eigen::Matrix4cd&);

}  // namespace semitoric
