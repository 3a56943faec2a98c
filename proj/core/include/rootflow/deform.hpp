#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rootflow/align.hpp"
#include "rootflow/hyper_scalar.hpp"
#include "rootflow/poly.hpp"
#include "rootflow/roots.hpp"

namespace rootflow {

enum class DeformationKind { linear, polynomial, series };

const char* to_string(DeformationKind k) noexcept;

/// A base polynomial f together with coefficient paths b_i(ε) describing
/// g(z) = Σ b_i zⁱ. paths.size() == base.degree() + 1.
struct Deformation {
  CPoly base;
  std::vector<HyperScalar> paths;
  DeformationKind kind = DeformationKind::series;

  int degree() const noexcept { return base.degree(); }

  /// b_i = a_i + ε·h_i
  static Deformation linear(const CPoly& base, std::span<const Complex> directions,
                            const SeriesConfig& cfg = {});
  /// b_i = Σ_k c[i][k]·ε^k
  static Deformation polynomial(const CPoly& base, const std::vector<std::vector<Complex>>& c,
                                const SeriesConfig& cfg = {});
  static Deformation series(const CPoly& base, std::vector<HyperScalar> paths);
};

/// Every b_i ≈ a_i.
bool is_infinitesimal_deformation(const Deformation& d);

/// st(b_n) = a_n ≠ 0 and every b_i ≈ a_i: the hypotheses under which roots
/// of g have standard parts that are roots of f.
bool leading_is_standard(const Deformation& d);

/// The complex polynomial obtained by substituting ε = t, 0 < t ≤ 1.
CPoly sample_at(const Deformation& d, double t);

/// g(z) evaluated in series arithmetic.
HyperScalar eval_deformation(const Deformation& d, const HyperScalar& z);

struct HenselConfig {
  /// |f(r)| must be at most this times the polynomial scale at r.
  double residual_tolerance = 1e-8;
  /// |f'(r)| must exceed this times the polynomial scale at r.
  double simple_root_threshold = 1e-8;
  int max_steps = 64;
};

/// Newton iteration in series arithmetic, s ← s − g(s)/g′(s), started at the
/// simple root r of the base. Returns s with st(s) = r and g(s) vanishing
/// through ε^order. Throws NotSimpleRoot when f′(r) is negligible.
HyperScalar hensel_lift_root(const Deformation& d, Complex r, Rational order,
                             const HenselConfig& cfg = {});

/// Default ladder 10⁻¹ … 10⁻⁶.
std::vector<double> default_ladder();

struct Trajectory {
  /// Root position at each ladder value.
  std::vector<Complex> points;
  Complex limit;
  /// RMS misfit of c₀ + c₁·t^{1/m} over the last three ladder points.
  double fit_residual = 0.0;
  int multiplicity = 1;
  Complex nearest_base_root;
  double distance_to_base = 0.0;
};

struct PairingAmbiguity {
  std::size_t ladder_index = 0;
  std::size_t trajectory = 0;
  std::size_t chosen = 0;
  std::size_t alternative = 0;
};

struct TrajectoryResult {
  std::vector<double> ladder;
  std::vector<Trajectory> trajectories;
  std::vector<PairingAmbiguity> ambiguities;
  RootSet base_roots;
  /// Largest residual_bound over the sampled root sets.
  double root_residual_bound = 0.0;
};

struct DeformConfig {
  std::vector<double> ladder = default_ladder();
  RootFinderConfig roots;
  HenselConfig hensel;
  /// Relative gap under which two pairings count as tied.
  double tie_tolerance = 1e-9;
  /// Limit-to-root tolerance; 0 selects 10·(fit residual + root-finder bound).
  double limit_tolerance = 0.0;
};

/// Roots of g at each ladder value, chained by bottleneck pairing, each
/// trajectory extrapolated to t → 0.
TrajectoryResult root_trajectories(const Deformation& d, const DeformConfig& cfg = {});

enum class ItemStatus { pass, fail, info };

const char* to_string(ItemStatus s) noexcept;

struct ReportItem {
  std::string name;
  ItemStatus status = ItemStatus::pass;
  std::string detail;
  /// Points or roots that witness the outcome.
  std::vector<Complex> witness;
};

struct LemmaReport {
  std::string claim;
  std::vector<ReportItem> items;
  std::vector<std::pair<std::string, double>> tolerances;

  /// No item failed. Informational items never fail a report.
  bool passed() const noexcept;
};

/// Checks, on n+1 or more distinct sample points:
///  - deformation ⇒ g(z) ≈ f(z) at each point;
///  - g(z) ≈ f(z) at all points ⇒ interpolated coefficients ≈ a_i
///    (interpolation done in series arithmetic);
///  - infinite coefficients ⇒ some sample value is infinite.
LemmaReport check_lemma1(const Deformation& d, std::span<const Complex> points,
                         const DeformConfig& cfg = {});

/// Checks that roots stay bounded along the ladder and that every trajectory
/// limit is a root of f. If the leading path is infinitesimal the report
/// records the violated hypothesis and the divergent trajectory instead.
LemmaReport check_lemma2(const Deformation& d, const DeformConfig& cfg = {});

/// Chebyshev nodes on [-1, 1], the default Lemma 1 sample points.
std::vector<Complex> chebyshev_points(int count);

/// Solves the Vandermonde system V·c = values in series arithmetic.
/// Throws SingularSystem when the nodes are too close.
std::vector<HyperScalar> interpolate(std::span<const Complex> points,
                                     std::span<const HyperScalar> values);

}  // namespace rootflow
