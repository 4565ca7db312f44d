#pragma once

#include "semitoric/catalog.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace semitoric {

enum class SingularityKind { EllipticElliptic, FocusFocus, Degenerate };

std::string kindName(SingularityKind k);

struct SingularityRecord {
  PhasePoint point;
  SingularityKind kind = SingularityKind::Degenerate;
  double lambda = 0.0;  // L(point)
  double eta = 0.0;     // H(point)
  /// Eigenvalues of J D^2(H + c L) in a Darboux frame, sorted.
  std::vector<std::complex<double>> eigen_data;
  double regularizer = 0.0;  // the c used for eigen_data
  /// Largest distance between an eigenvalue and the nearest member of its
  /// {±λ, ±conj λ} partners, relative to the spectral radius.
  double pairing_residual = 0.0;
};

struct ClassifyOptions {
  double tolerance = 1e-7;  // relative to the spectral radius
  std::uint64_t regularizer_seed = 0x5eed;
  int attempts = 2;
};

struct RankZeroOptions {
  int random_starts = 8;
  std::uint64_t seed = 1;
  double merge_radius = 1e-8;
  double residual_tolerance = 1e-11;
  int max_iterations = 60;
};

/// Points where X_L and X_H both vanish: Gauss–Newton from the pole lattice
/// and from random starts. Seeds that fail to converge are skipped and noted
/// in diagnostics (if given).
std::vector<PhasePoint> findRankZeroPoints(const SystemInstance& system, const RankZeroOptions& opt = {},
                                           std::vector<std::string>* diagnostics = nullptr);

/// Williamson type of a rank-0 point. Throws PreconditionError if X_L or X_H
/// exceeds 1e-8 at p.
SingularityRecord classify(const SystemInstance& system, const PhasePoint& p, const ClassifyOptions& opt = {});

/// Spectrum of J S for a 4x4 symmetric S in (q1, q2, p1, p2) order.
std::vector<std::complex<double>> linearizationSpectrum(const Eigen::Matrix4d& S);

/// Hessians of L and H at a rank-0 point in the Darboux chart of the point.
std::pair<Eigen::Matrix4d, Eigen::Matrix4d> chartHessians(const SystemInstance& system, const PhasePoint& p);

struct FocusFocusCensus {
  int n_ff = 0;
  std::vector<SingularityRecord> records;
  std::vector<std::string> diagnostics;
};

FocusFocusCensus countFocusFocus(const SystemInstance& system, const RankZeroOptions& search = {},
                                 const ClassifyOptions& opt = {});

using SystemFactory = std::function<SystemInstance(double)>;

struct Transition {
  double value = 0.0;
  /// Classification signature (kinds of the rank-0 points) on either side.
  std::vector<SingularityKind> below, above;
};

/// Samples the axis at resolution + 1 equally spaced values and bisects every
/// flip of the rank-0 classification to |Δ| < tol. A flip whose right end is
/// the degenerate endpoint of the axis is reported at that endpoint.
std::vector<Transition> transitionScan(const SystemFactory& make, double from, double to, int resolution,
                                       double tol = 1e-10, const RankZeroOptions& search = {.random_starts = 0});

struct RegionMap {
  std::vector<double> s1_axis, s2_axis;
  /// counts[i2 * s1_axis.size() + i1] = n_FF at (s1_axis[i1], s2_axis[i2]).
  std::vector<int> counts;
  /// Refined boundary points between neighbouring cells of different count.
  std::vector<Eigen::Vector2d> boundary;

  int at(std::size_t i1, std::size_t i2) const { return counts[i2 * s1_axis.size() + i1]; }
  std::string toCsv() const;
  std::string toSvg(int cell_pixels = 8) const;
};

/// n_FF over the grid s_i = k / (grid - 1) of the two-focus family with fixed
/// weights. Runs on `threads` workers; the result does not depend on it.
RegionMap regionMap(double R1, double R2, int grid, int threads = 1,
                    const RankZeroOptions& search = {.random_starts = 0});

}  // namespace semitoric
