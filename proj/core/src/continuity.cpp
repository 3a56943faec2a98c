#include "rootflow/continuity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "rootflow/align.hpp"

namespace rootflow {
namespace {

std::vector<Complex> random_direction(std::mt19937_64& rng, std::size_t size) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Complex> dir(size);
  double top = 0.0;
  for (auto& c : dir) {
    c = std::polar(unit(rng), 2.0 * std::numbers::pi * unit(rng));
    top = std::max(top, std::abs(c));
  }
  if (top == 0.0) {
    dir.front() = 1.0;
    top = 1.0;
  }
  for (auto& c : dir) c /= top;
  return dir;
}

}  // namespace

double perturbed_distance(const CPoly& f, const RootSet& roots_f, double delta,
                          std::span<const Complex> direction, const RootFinderConfig& cfg) {
  const auto a = f.coeffs();
  std::vector<Complex> b(a.begin(), a.end());
  for (std::size_t i = 0; i < b.size(); ++i) {
    double step = delta;
    if (i + 1 == b.size()) step = std::min(delta, 0.5 * std::abs(f.leading()));
    b[i] += step * direction[i];
  }
  const RootSet roots_g = find_roots(CPoly(std::move(b), 0.0), cfg);
  return align_bottleneck(roots_f, roots_g).max_distance;
}

WorstCase worst_distance(const CPoly& f, double delta, const SamplerConfig& cfg) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  const RootSet roots_f = find_roots(f, cfg.roots);
  const std::size_t size = f.coeffs().size();

  WorstCase best;
  best.distance = -1.0;
  auto consider = [&](std::vector<Complex> dir) {
    try {
      const double d = perturbed_distance(f, roots_f, delta, dir, cfg.roots);
      ++best.evaluated;
      if (d > best.distance) {
        best.distance = d;
        best.witness = std::move(dir);
      }
    } catch (const NonConvergence&) {
      ++best.skipped;
    }
  };

  const Complex units[] = {1.0, -1.0, Complex(0, 1), Complex(0, -1)};
  for (std::size_t i = 0; i < size; ++i) {
    for (Complex u : units) {
      std::vector<Complex> dir(size);
      dir[i] = u;
      consider(std::move(dir));
    }
  }
  std::mt19937_64 rng(cfg.seed);
  for (int k = 0; k < cfg.samples; ++k) consider(random_direction(rng, size));

  // One round of sign refinement around the best candidate.
  if (!best.witness.empty()) {
    for (std::size_t i = 0; i < size; ++i) {
      std::vector<Complex> dir = best.witness;
      if (dir[i] == Complex{}) continue;
      dir[i] = -dir[i];
      consider(std::move(dir));
    }
  }
  if (best.witness.empty()) throw NonConvergence("every sampled perturbation failed", {});
  return best;
}

ModulusPoint estimate_delta(const CPoly& f, double epsilon, const ModulusConfig& cfg) {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  ModulusPoint point;
  point.epsilon = epsilon;
  point.samples = cfg.sampler.samples;
  point.seed = cfg.sampler.seed;

  WorstCase at_lo = worst_distance(f, cfg.delta_min, cfg.sampler);
  if (!(at_lo.distance < epsilon)) {
    std::ostringstream os;
    os << "no passing delta in [" << cfg.delta_min << ", " << cfg.delta_max
       << "]: worst distance " << at_lo.distance << " at delta " << cfg.delta_min;
    const WorstCase at_hi = worst_distance(f, cfg.delta_max, cfg.sampler);
    os << ", " << at_hi.distance << " at delta " << cfg.delta_max;
    throw Error(os.str());
  }
  WorstCase at_hi = worst_distance(f, cfg.delta_max, cfg.sampler);
  if (at_hi.distance < epsilon) {
    point.delta = cfg.delta_max;
    point.distance_at_delta = at_hi.distance;
    point.witness = at_hi.witness;
    point.saturated = true;
    return point;
  }

  double lo = cfg.delta_min, hi = cfg.delta_max;
  while (hi / lo >= cfg.bracket_ratio) {
    const double mid = std::sqrt(lo * hi);
    WorstCase w = worst_distance(f, mid, cfg.sampler);
    if (w.distance < epsilon) {
      lo = mid;
      at_lo = std::move(w);
    } else {
      hi = mid;
      at_hi = std::move(w);
    }
  }
  point.delta = lo;
  point.distance_at_delta = at_lo.distance;
  point.witness = at_hi.witness;
  return point;
}

ModulusCurve modulus_curve(const CPoly& f, std::span<const double> epsilons,
                           const ModulusConfig& cfg) {
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    if (!(epsilons[k] > 0.0)) throw InvalidArgument("epsilons must be positive");
    if (k > 0 && !(epsilons[k] > epsilons[k - 1])) throw InvalidArgument("epsilons must be increasing");
  }
  ModulusCurve curve;
  curve.seed = cfg.sampler.seed;
  for (double eps : epsilons) {
    try {
      curve.points.push_back(estimate_delta(f, eps, cfg));
    } catch (const Error& e) {
      ModulusPoint p;
      p.epsilon = eps;
      p.samples = cfg.sampler.samples;
      p.seed = cfg.sampler.seed;
      p.status = e.what();
      curve.points.push_back(std::move(p));
    }
  }

  // A delta valid for a smaller epsilon is valid for every larger one.
  const ModulusPoint* floor = nullptr;
  for (auto& p : curve.points) {
    if (p.status != "ok") continue;
    if (floor && p.delta < floor->delta) {
      p.delta = floor->delta;
      p.distance_at_delta = floor->distance_at_delta;
      p.monotonized = true;
    }
    floor = &p;
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& p : curve.points) {
    if (p.status != "ok" || p.saturated) continue;
    const double x = std::log(p.epsilon), y = std::log(p.delta);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  const double det = n * sxx - sx * sx;
  curve.slope = n >= 2 && det > 0.0 ? (n * sxy - sx * sy) / det
                                    : std::numeric_limits<double>::quiet_NaN();
  return curve;
}

SoundnessResult soundness_check(const CPoly& f, const ModulusPoint& point, int samples,
                                std::uint64_t seed, const RootFinderConfig& cfg) {
  SoundnessResult out;
  const RootSet roots_f = find_roots(f, cfg);
  std::mt19937_64 rng(seed);
  for (int k = 0; k < samples; ++k) {
    const auto dir = random_direction(rng, f.coeffs().size());
    try {
      const double d = perturbed_distance(f, roots_f, 0.5 * point.delta, dir, cfg);
      ++out.samples;
      out.max_distance = std::max(out.max_distance, d);
      if (!(d < point.epsilon)) ++out.violations;
    } catch (const NonConvergence&) {
      ++out.skipped;
    }
  }
  return out;
}

}  // namespace rootflow
