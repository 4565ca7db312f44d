#pragma once

#include "semitoric/catalog.hpp"
#include "semitoric/normal_form.hpp"
#include "semitoric/singularities.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace semitoric {

// ---------------------------------------------------------------------------
// Reduced-space numerics

/// Area of {H < h} in the reduced space divided by 2π.
double reducedAction(const ReducedModel& m, double h);

/// [min H, max H] on the reduced space.
std::pair<double, double> energyRange(const ReducedModel& m);

struct ReturnTimes {
  double tau1 = 0.0;  // in [0, 2π)
  double tau2 = 0.0;
  PhasePoint start;
};

/// First return of the H-flow to the starting L-orbit. Throws RangeError when
/// the fiber is empty and IntegrationError when no return occurs before
/// time_cap.
ReturnTimes returnTimes(const SystemInstance& system, double l, double h, double rtol = 1e-12,
                        double time_cap = 1e4);

enum class ActionMethod { Area, ReturnTime };

struct ActionSample {
  double l = 0.0, h = 0.0;
  double j = 0.0;  // Eliasson coordinate, NaN without a normal form
  double I = 0.0;  // area below h / 2π at level l
  double tau1 = 0.0, tau2 = 0.0;  // NaN for the area method
};

/// The return-time method integrates τ2 / 2π over [min H, h] with adaptive
/// Gauss–Kronrod quadrature.
ActionSample actionSample(const SystemInstance& system, double l, double h, ActionMethod method,
                          const EliassonMap* normal_form = nullptr);

// ---------------------------------------------------------------------------
// Cartographic charts

/// A vertical line l = λ through rank-0 values, with the integer jumps of
/// ∂μ/∂l across it measured between consecutive interior critical values.
struct CriticalLine {
  double lambda = 0.0;
  std::vector<double> ff_values;      // η of focus-focus points on the line, sorted
  std::vector<int> kinks;             // one per h-interval, bottom to top
  int epsilon = +1;                   // cut direction when ff_values is non-empty
  int kappa = 0;                      // coefficient of (l - λ)_+ added to μ
};

/// Generalized toric second component μ2 = μ + Σ κ (l - λ)_+ + m l.
class CartographicChart {
 public:
  /// signs has one entry per focus-focus point, in census order.
  CartographicChart(const SystemInstance& system, const FocusFocusCensus& census, std::vector<int> signs,
                    int shear = 0);

  const SystemInstance& system() const { return system_; }
  const std::vector<CriticalLine>& lines() const { return lines_; }
  int shear() const { return shear_; }
  /// Cut sign attached to a focus-focus record (by its λ).
  int epsilonAt(double lambda) const;

  double mu2(double l, double h) const;
  /// Range of L used for the polygon (the non-compact family is capped).
  std::pair<double, double> levelWindow() const { return window_; }
  bool capped() const { return capped_; }

 private:
  SystemInstance system_;
  std::vector<CriticalLine> lines_;
  int shear_ = 0;
  std::pair<double, double> window_;
  bool capped_ = false;
};

// ---------------------------------------------------------------------------
// Invariants

/// The annulus is shrunk by a common factor when the focus-focus value is
/// closer than 2 Delta to the image boundary or to another critical line.
struct TaylorOptions {
  double delta = 0.02;  // inner radius of the sampling annulus in |z|
  double Delta = 0.2;   // outer radius
  int radial = 24;
  int angular = 24;
  int fit_degree = 4;
  int threads = 1;
  double max_residual = 1e-3;
};

struct TaylorInvariant {
  double lambda = 0.0, eta = 0.0;
  double s10 = 0.0, s01 = 0.0, s20 = 0.0, s11 = 0.0, s02 = 0.0;
  double raw_s10 = 0.0;   // fitted l-coefficient before reduction mod 2π
  double constant = 0.0;  // 2π I(0)
  double residual = 0.0;  // max fit residual on the annulus
  double delta = 0.0, Delta = 0.0;  // annulus actually sampled
  std::string branch;
};

/// Fits 2π μ2 + Im(z log z - z) on an annulus around the focus-focus value,
/// z = (l - λ) + i j with j from the Eliasson map, log cut along the ε-cut.
/// Cuts at other critical lines are taken upward for the fit, so the result
/// does not depend on their signs.
TaylorInvariant taylorInvariant(const CartographicChart& chart, const SingularityRecord& ff, const EliassonMap& nf,
                                const TaylorOptions& opt = {});

struct HeightInvariant {
  double lambda = 0.0, eta = 0.0;
  double height = 0.0;      // μ2(m) - min μ2 on the line l = λ
  double complement = 0.0;  // the part above η
  double total = 0.0;       // total height of the fiber line
};

HeightInvariant heightInvariant(const SystemInstance& system, const SingularityRecord& ff);
/// Same quantity read off a cartographic chart.
HeightInvariant heightInvariant(const CartographicChart& chart, const SingularityRecord& ff);

struct PolygonVertex {
  Eigen::Vector2d point;
  bool rational = false;
  std::pair<long, long> x_fraction{0, 1}, y_fraction{0, 1};
};

struct SemitoricPolygon {
  std::vector<PolygonVertex> vertices;  // counter-clockwise
  std::vector<double> cuts;             // λ_r
  std::vector<Eigen::Vector2d> marked;  // images of the focus-focus points
  std::vector<int> signs;               // ε_r
  std::vector<int> twisting;            // k_r
  bool capped = false;                  // right edge is an artificial cap
  bool warning = false;                 // some vertex could not be rationalized

  /// T^m: (x, y) -> (x, y + m x), every k_r -> k_r + m.
  SemitoricPolygon sheared(int m) const;
};

/// Vertices by slope-change detection on the boundary curves of the chart
/// image, snapped to rationals with denominator <= 64 within 1e-5.
SemitoricPolygon cartographicPolygon(const CartographicChart& chart, int samples = 512);

/// k = floor(raw ∂_l S / 2π) for the chart's representative; a shear within
/// 1e-6 of an integer is rounded so that s10 = 0 gets k = round.
int twistingIndex(const TaylorInvariant& taylor);

/// Continued-fraction snap; nullopt if no fraction within tol has a small
/// enough denominator.
std::optional<std::pair<long, long>> rationalize(double x, long max_den = 64, double tol = 1e-5);

/// Throws NearDegenerateError for parameters within 1e-6 of a transition.
void requireNonDegenerate(const SystemInstance& system, const FocusFocusCensus& census);

struct InvariantOptions {
  int nf_degree = 6;
  TaylorOptions taylor;
  std::vector<int> signs;  // default all +1
  int shear = 0;
  int polygon_samples = 512;
};

/// All five invariants as a versioned JSON document.
nlohmann::json computeInvariants(const SystemInstance& system, const InvariantOptions& opt = {});

// ---------------------------------------------------------------------------
// Pictures

struct MomentumImage {
  std::vector<Eigen::Vector2d> lower, upper;
  std::vector<SingularityRecord> critical;
};

MomentumImage momentumImage(const SystemInstance& system, int samples = 200, double cap = 0.0);
std::string momentumImageSvg(const MomentumImage& img);
std::string polygonSvg(const SemitoricPolygon& poly);

}  // namespace semitoric
