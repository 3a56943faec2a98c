#pragma once

#include <functional>
#include <span>
#include <vector>

#include "rootflow/poly.hpp"

namespace rootflow {

struct RootCluster {
  Complex center;
  int multiplicity = 1;
  /// Largest distance from the center to a member approximation.
  double radius = 0.0;
};

/// Roots of a polynomial, possibly with duplication, grouped into clusters.
///
/// `residual_bound` is relative to the polynomial scale
/// S(R) = ‖a‖₁·max(1, R)ⁿ: for every cluster of multiplicity m at center c,
/// |p^{(k)}(c)/k!| ≤ residual_bound·S(|c|) for k < m, and
/// |p(z) − aₙ∏(z − rᵢ)| ≤ residual_bound·S(R) for |z| ≤ R, where R is the
/// largest root modulus.
struct RootSet {
  std::vector<RootCluster> clusters;
  double residual_bound = 0.0;

  int total_multiplicity() const noexcept;
  /// Cluster centers repeated by multiplicity, in cluster order.
  std::vector<Complex> expanded() const;
};

struct RootFinderConfig {
  int max_iterations = 200;
  /// Per-root stopping threshold on |correction| / |root|.
  double relative_step = 1e-13;
  /// Floor of the cluster-merge radius; the effective radius at r is
  /// max(merge_radius, 1e3·machine-epsilon·|r|).
  double merge_radius = 1e-7;
  /// Leading-coefficient zero tolerance.
  double tolerance = kDefaultTolerance;
};

/// All roots by Aberth–Ehrlich simultaneous iteration, clustered.
/// Throws NonConvergence (carrying the last iterate) after max_iterations.
RootSet find_roots(const CPoly& p, const RootFinderConfig& cfg = {});

/// Independent check: eigenvalues of the balanced companion matrix of the
/// monic normalization.
RootSet roots_oracle(const CPoly& p, const RootFinderConfig& cfg = {});

/// Single-linkage clustering at a fixed radius; clusters report their
/// multiplicity-weighted centroid.
RootSet cluster_roots(const RootSet& rs, double radius);

/// Recomputes `residual_bound` for `rs` against `p`.
double residual_bound(const CPoly& p, const RootSet& rs);

}  // namespace rootflow
