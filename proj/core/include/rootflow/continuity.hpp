#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rootflow/poly.hpp"
#include "rootflow/roots.hpp"

namespace rootflow {

/// Sampler for the adversarial inner problem: how far can the roots move
/// under a coefficient perturbation of max-norm delta?
///
/// Candidate directions, in order: ±e_i and ±i·e_i for every coefficient,
/// then `samples` seeded random max-norm-1 directions, then one round of
/// coordinate sign flips from the best candidate. The leading coefficient's
/// perturbation is capped at |aₙ|/2 so the degree is preserved.
struct SamplerConfig {
  int samples = 64;
  std::uint64_t seed = 20240601;
  RootFinderConfig roots;
};

struct WorstCase {
  double distance = 0.0;
  /// Max-norm-1 direction that produced `distance`.
  std::vector<Complex> witness;
  int evaluated = 0;
  /// Directions whose root finding failed.
  int skipped = 0;
};

WorstCase worst_distance(const CPoly& f, double delta, const SamplerConfig& cfg = {});

/// Bottleneck distance between the roots of f and of f + delta·direction
/// (leading perturbation capped at |aₙ|/2).
double perturbed_distance(const CPoly& f, const RootSet& roots_f, double delta,
                          std::span<const Complex> direction, const RootFinderConfig& cfg = {});

/// One point of the empirical modulus of continuity: the largest tested
/// delta whose worst observed root displacement stays below epsilon.
/// An estimate from sampling, not a certificate.
struct ModulusPoint {
  double epsilon = 0.0;
  double delta = 0.0;
  double distance_at_delta = 0.0;
  /// Direction that broke the bound at the failing bracket endpoint
  /// (the passing endpoint's worst direction when saturated).
  std::vector<Complex> witness;
  int samples = 0;
  std::uint64_t seed = 0;
  /// delta reached the upper end of the search range.
  bool saturated = false;
  /// delta was raised to keep the curve monotone in epsilon.
  bool monotonized = false;
  /// "ok" or an error message.
  std::string status = "ok";
};

struct ModulusConfig {
  SamplerConfig sampler;
  double delta_min = 1e-15;
  double delta_max = 1.0;
  /// Bisection stops once hi/lo falls below this ratio.
  double bracket_ratio = 1.1;
};

/// Bisection on log delta. Throws Error when even delta_min moves the roots
/// by epsilon or more.
ModulusPoint estimate_delta(const CPoly& f, double epsilon, const ModulusConfig& cfg = {});

struct ModulusCurve {
  std::vector<ModulusPoint> points;
  /// Least-squares slope of log delta against log epsilon over the
  /// unsaturated, successful points; NaN when fewer than two qualify.
  double slope = 0.0;
  std::uint64_t seed = 0;
};

/// estimate_delta for each epsilon (positive, increasing). Failed points are
/// kept with their status; delta is made non-decreasing afterwards.
ModulusCurve modulus_curve(const CPoly& f, std::span<const double> epsilons,
                           const ModulusConfig& cfg = {});

struct SoundnessResult {
  int samples = 0;
  int violations = 0;
  int skipped = 0;
  double max_distance = 0.0;
};

/// Fresh random perturbations of max-norm delta/2; each should move the
/// roots by less than epsilon.
SoundnessResult soundness_check(const CPoly& f, const ModulusPoint& point, int samples,
                                std::uint64_t seed, const RootFinderConfig& cfg = {});

}  // namespace rootflow
