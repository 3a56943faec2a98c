#include "rootflow/roots.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace rootflow {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Single-linkage grouping of `points` under `close`, clusters in order of
// their first member.
template <class Pred>
std::vector<std::vector<std::size_t>> single_linkage(std::span<const Complex> points,
                                                     Pred close) {
  const std::size_t n = points.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (close(points[i], points[j])) {
        const std::size_t a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::ptrdiff_t> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<std::ptrdiff_t>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[r])].push_back(i);
  }
  return groups;
}

RootSet build_clusters(std::span<const Complex> points, std::span<const int> mult,
                       const std::vector<std::vector<std::size_t>>& groups) {
  RootSet out;
  for (const auto& g : groups) {
    RootCluster c;
    c.multiplicity = 0;
    Complex sum{};
    for (std::size_t i : g) {
      sum += static_cast<double>(mult[i]) * points[i];
      c.multiplicity += mult[i];
    }
    c.center = sum / static_cast<double>(c.multiplicity);
    for (std::size_t i : g) c.radius = std::max(c.radius, std::abs(points[i] - c.center));
    out.clusters.push_back(c);
  }
  return out;
}

// Groups approximations that sit within the merge radius, or whose midpoint
// is itself a root to rounding accuracy (a multiple root the arithmetic
// cannot resolve).
RootSet cluster_for(const CPoly& p, std::span<const Complex> approx,
                    const RootFinderConfig& cfg) {
  const auto a = p.coeffs();
  const double n = static_cast<double>(p.degree());
  auto close = [&](Complex x, Complex y) {
    const double d = std::abs(x - y);
    const double radius =
        std::max(cfg.merge_radius, 1e3 * kEps * std::max(std::abs(x), std::abs(y)));
    if (d <= radius) return true;
    const Complex mid = 0.5 * (x + y);
    if (d > 1e-4 * std::max(1.0, std::abs(mid))) return false;
    return std::abs(horner(a, mid)) <= 4.0 * n * kEps * abs_scale(a, std::abs(mid));
  };
  const std::vector<int> ones(approx.size(), 1);
  RootSet rs = build_clusters(approx, ones, single_linkage(approx, close));
  rs.residual_bound = residual_bound(p, rs);
  return rs;
}

RootSet linear_root(const CPoly& p) {
  RootSet rs;
  rs.clusters.push_back({-p[0] / p[1], 1, 0.0});
  rs.residual_bound = residual_bound(p, rs);
  return rs;
}

}  // namespace

int RootSet::total_multiplicity() const noexcept {
  int m = 0;
  for (const auto& c : clusters) m += c.multiplicity;
  return m;
}

std::vector<Complex> RootSet::expanded() const {
  std::vector<Complex> out;
  for (const auto& c : clusters) out.insert(out.end(), static_cast<std::size_t>(c.multiplicity), c.center);
  return out;
}

double residual_bound(const CPoly& p, const RootSet& rs) {
  const auto a = p.coeffs();
  const int n = p.degree();
  const double norm1 = abs_scale(a, 1.0);
  auto scale = [&](double r) { return norm1 * std::pow(std::max(1.0, r), n); };

  double bound = 0.0;
  double rmax = 0.0;
  for (const auto& c : rs.clusters) {
    rmax = std::max(rmax, std::abs(c.center));
    const auto t = taylor_coefficients(a, c.center);
    for (int k = 0; k < c.multiplicity && k <= n; ++k) {
      bound = std::max(bound, std::abs(t[static_cast<std::size_t>(k)]) / scale(std::abs(c.center)));
    }
  }

  // p − aₙ∏(z − rᵢ) has degree < n; sampling 4n+4 points of the circle
  // |z| = ρ bounds it on the whole disk up to a factor below 2.
  const auto roots = rs.expanded();
  const double rho = std::max(1.0, rmax);
  const int m = 4 * n + 4;
  double worst = 0.0;
  for (int k = 0; k < m; ++k) {
    const Complex z = std::polar(rho, 2.0 * std::numbers::pi * (k + 0.5) / m);
    Complex prod = p.leading();
    for (const Complex& r : roots) prod *= (z - r);
    worst = std::max(worst, std::abs(horner(a, z) - prod));
  }
  bound = std::max(bound, 2.0 * worst / scale(rho));
  return bound;
}

RootSet find_roots(const CPoly& p, const RootFinderConfig& cfg) {
  const int n = p.degree();
  if (n < 1) throw InvalidArgument("root finding needs degree >= 1");
  if (std::abs(p.leading()) <= cfg.tolerance) throw InvalidArgument("leading coefficient is zero");
  if (n == 1) return linear_root(p);

  const auto a = p.coeffs();
  double bound = 0.0;
  for (int i = 0; i < n; ++i) bound = std::max(bound, std::abs(a[static_cast<std::size_t>(i)] / p.leading()));
  const double radius = 1.0 + bound;

  // Golden-angle phases on the Cauchy-bound circle.
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Complex> z(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) z[static_cast<std::size_t>(k)] = std::polar(radius, 0.4 + golden * k);

  std::vector<bool> done(z.size(), false);
  std::vector<Complex> next = z;
  const double floor_step = 4.0 * kEps * radius;
  bool all_done = false;
  for (int iter = 0; iter < cfg.max_iterations && !all_done; ++iter) {
    // Jacobi sweep: every correction reads the previous iterate.
    for (std::size_t k = 0; k < z.size(); ++k) {
      if (done[k]) continue;
      const auto [v, d] = eval_with_derivative(a, z[k]);
      if (std::abs(v) <= 2.0 * n * kEps * abs_scale(a, std::abs(z[k]))) {
        done[k] = true;
        continue;
      }
      Complex s{};
      for (std::size_t j = 0; j < z.size(); ++j) {
        if (j != k && z[j] != z[k]) s += 1.0 / (z[k] - z[j]);
      }
      Complex corr = v / (d - v * s);
      if (!finite(corr)) corr = std::polar(floor_step + std::abs(v), static_cast<double>(k));
      next[k] = z[k] - corr;
      if (std::abs(corr) <= cfg.relative_step * std::abs(next[k]) || std::abs(corr) <= floor_step) {
        done[k] = true;
      }
    }
    z = next;
    all_done = std::all_of(done.begin(), done.end(), [](bool b) { return b; });
  }
  if (!all_done) {
    throw NonConvergence("Aberth iteration did not converge in " +
                             std::to_string(cfg.max_iterations) + " sweeps",
                         z);
  }
  return cluster_for(p, z, cfg);
}

RootSet roots_oracle(const CPoly& p, const RootFinderConfig& cfg) {
  const int n = p.degree();
  if (n < 1) throw InvalidArgument("root finding needs degree >= 1");
  if (n == 1) return linear_root(p);

  const auto a = p.coeffs();
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -a[static_cast<std::size_t>(i)] / p.leading();

  // Parlett–Reinsch balancing by powers of two.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      const double row = companion.row(i).cwiseAbs().sum() - std::abs(companion(i, i));
      const double col = companion.col(i).cwiseAbs().sum() - std::abs(companion(i, i));
      if (row == 0.0 || col == 0.0) continue;
      int e = 0;
      std::frexp(row / col, &e);
      e /= 2;
      if (e == 0) continue;
      const double f = std::ldexp(1.0, e);
      if (col * f + row / f < 0.95 * (col + row)) {
        companion.row(i) /= f;
        companion.col(i) *= f;
        changed = true;
      }
    }
  }

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw NonConvergence("companion eigenvalue iteration failed", {});
  }
  std::vector<Complex> z(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
  // Order-independent output: sort by (re, im) before clustering.
  std::sort(z.begin(), z.end(), [](Complex x, Complex y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return cluster_for(p, z, cfg);
}

RootSet cluster_roots(const RootSet& rs, double radius) {
  if (radius < 0.0) throw InvalidArgument("cluster radius must be non-negative");
  std::vector<Complex> centers;
  std::vector<int> mult;
  for (const auto& c : rs.clusters) {
    centers.push_back(c.center);
    mult.push_back(c.multiplicity);
  }
  auto groups = single_linkage(centers, [&](Complex x, Complex y) {
    return std::abs(x - y) <= radius;
  });
  RootSet out = build_clusters(centers, mult, groups);
  // Keep member spread from the input clusters.
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t i : groups[g]) {
      out.clusters[g].radius = std::max(out.clusters[g].radius,
                                        std::abs(centers[i] - out.clusters[g].center) + rs.clusters[i].radius);
    }
  }
  out.residual_bound = rs.residual_bound;
  return out;
}

}  // namespace rootflow
