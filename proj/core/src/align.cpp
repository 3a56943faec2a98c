#include "rootflow/align.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace rootflow {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Matrix = std::vector<std::vector<double>>;

Matrix distance_matrix(std::span<const Complex> a, std::span<const Complex> b) {
  Matrix d(a.size(), std::vector<double>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) d[i][j] = std::abs(a[i] - b[j]);
  }
  return d;
}

// Kuhn's augmenting paths on the threshold graph {(i, j) : d[i][j] <= limit}.
bool has_perfect_matching(const Matrix& d, double limit) {
  const std::size_t n = d.size();
  std::vector<std::ptrdiff_t> match_col(n, -1);
  std::vector<char> seen(n);
  auto augment = [&](auto&& self, std::size_t row) -> bool {
    for (std::size_t col = 0; col < n; ++col) {
      if (d[row][col] > limit || seen[col]) continue;
      seen[col] = 1;
      if (match_col[col] < 0 || self(self, static_cast<std::size_t>(match_col[col]))) {
        match_col[col] = static_cast<std::ptrdiff_t>(row);
        return true;
      }
    }
    return false;
  };
  for (std::size_t row = 0; row < n; ++row) {
    std::fill(seen.begin(), seen.end(), 0);
    if (!augment(augment, row)) return false;
  }
  return true;
}

// Min-cost perfect assignment (Hungarian method with potentials). Infinite
// costs mark forbidden edges; a feasible assignment must exist.
std::vector<std::size_t> min_sum_assignment(const Matrix& cost) {
  const std::size_t n = cost.size();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      if (j1 == 0) throw Error("assignment infeasible under the bottleneck threshold");
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

Alignment make_alignment(std::vector<std::pair<std::size_t, std::size_t>> pairs,
                         std::span<const Complex> rf, std::span<const Complex> rg,
                         AlignMethod method) {
  std::sort(pairs.begin(), pairs.end());
  Alignment out;
  out.method = method;
  out.pairs = std::move(pairs);
  for (const auto& [i, j] : out.pairs) {
    out.distances.push_back(std::abs(rf[i] - rg[j]));
    out.max_distance = std::max(out.max_distance, out.distances.back());
  }
  return out;
}

bool lex_less(Complex a, Complex b) {
  return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
}

std::size_t nearest_unused(std::span<const Complex> pts, const std::vector<char>& used, Complex z) {
  std::size_t best = pts.size();
  double best_d = kInf;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (used[i]) continue;
    const double d = std::abs(pts[i] - z);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

}  // namespace

const char* to_string(AlignMethod m) noexcept {
  return m == AlignMethod::deflation ? "deflation" : "bottleneck";
}

std::vector<std::size_t> Alignment::as_permutation() const {
  std::vector<std::size_t> perm(pairs.size());
  for (const auto& [i, j] : pairs) perm.at(i) = j;
  return perm;
}

Alignment align_bottleneck(std::span<const Complex> rf, std::span<const Complex> rg) {
  if (rf.size() != rg.size()) {
    throw InvalidArgument("alignment needs equal root counts (" + std::to_string(rf.size()) +
                          " vs " + std::to_string(rg.size()) + ")");
  }
  const std::size_t n = rf.size();
  if (n == 0) return make_alignment({}, rf, rg, AlignMethod::bottleneck);

  const Matrix d = distance_matrix(rf, rg);
  std::vector<double> candidates;
  candidates.reserve(n * n);
  for (const auto& row : d) candidates.insert(candidates.end(), row.begin(), row.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (has_perfect_matching(d, candidates[mid])) hi = mid;
    else lo = mid + 1;
  }
  const double limit = candidates[lo];

  Matrix cost = d;
  for (auto& row : cost) {
    for (double& c : row) {
      if (c > limit) c = kInf;
    }
  }
  const auto assignment = min_sum_assignment(cost);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) pairs.emplace_back(i, assignment[i]);
  return make_alignment(std::move(pairs), rf, rg, AlignMethod::bottleneck);
}

Alignment align_bottleneck(const RootSet& roots_f, const RootSet& roots_g) {
  if (roots_f.total_multiplicity() != roots_g.total_multiplicity()) {
    throw InvalidArgument("alignment needs equal total multiplicity");
  }
  const auto rf = roots_f.expanded();
  const auto rg = roots_g.expanded();
  return align_bottleneck(rf, rg);
}

DeflationTrace align_by_deflation_traced(const CPoly& f, const CPoly& g, const AlignConfig& cfg) {
  if (f.degree() != g.degree()) {
    throw InvalidArgument("degree mismatch: deg f = " + std::to_string(f.degree()) +
                          ", deg g = " + std::to_string(g.degree()));
  }
  if (f.degree() < 1) throw InvalidArgument("alignment needs degree >= 1");
  if (std::abs(f.leading()) <= cfg.roots.tolerance || std::abs(g.leading()) <= cfg.roots.tolerance) {
    throw InvalidArgument("leading coefficient is zero");
  }

  DeflationTrace trace;
  trace.roots_f = find_roots(f, cfg.roots).expanded();
  trace.roots_g = find_roots(g, cfg.roots).expanded();
  const std::span<const Complex> rf = trace.roots_f, rg = trace.roots_g;

  double rho = 1.0;
  for (Complex z : rf) rho = std::max(rho, std::abs(z));
  for (Complex z : rg) rho = std::max(rho, std::abs(z));

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<char> used_f(rf.size(), 0), used_g(rg.size(), 0);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  CPoly fk = f, gk = g;

  for (int degree = f.degree(); degree >= 1; --degree) {
    Complex r, s;
    if (degree == 1) {
      r = -fk[0] / fk[1];
      s = -gk[0] / gk[1];
    } else {
      const auto rk = find_roots(fk, cfg.roots).expanded();
      const auto sk = find_roots(gk, cfg.roots).expanded();
      double best = kInf;
      bool have = false;
      for (Complex cand : sk) {
        double d = kInf;
        Complex partner;
        for (Complex x : rk) {
          if (std::abs(cand - x) < d) {
            d = std::abs(cand - x);
            partner = x;
          }
        }
        const double tie = 1e-12 * std::max(1.0, best);
        if (!have || d < best - tie || (d <= best + tie && lex_less(cand, s))) {
          have = true;
          best = d;
          s = cand;
          r = partner;
        }
      }
    }

    const std::size_t i = nearest_unused(rf, used_f, r);
    const std::size_t j = nearest_unused(rg, used_g, s);
    used_f[i] = used_g[j] = 1;
    pairs.emplace_back(i, j);

    DeflationLevel level{degree, r, s, 0.0, 0.0};
    if (degree >= 2) {
      const CPoly fh = deflate_stable(fk, r);
      const CPoly gh = deflate_stable(gk, s);
      for (int k = 0; k < cfg.identity_probes; ++k) {
        const Complex z = std::polar(rho * std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
        const Complex lhs = (z - r) * (eval(fh, z) - eval(gh, z));
        const Complex rhs = eval(fk, z) - eval(gk, z) - eval(gh, z) * (s - r);
        const double scale =
            std::max(abs_scale(fk.coeffs(), std::abs(z)), abs_scale(gk.coeffs(), std::abs(z)));
        level.coefficient_scale = std::max(level.coefficient_scale, scale);
        level.identity_residual = std::max(level.identity_residual, std::abs(lhs - rhs) / scale);
      }
      fk = fh;
      gk = gh;
    }
    trace.levels.push_back(level);
  }

  trace.alignment = make_alignment(std::move(pairs), rf, rg, AlignMethod::deflation);
  return trace;
}

Alignment align_by_deflation(const CPoly& f, const CPoly& g, const AlignConfig& cfg) {
  return align_by_deflation_traced(f, g, cfg).alignment;
}

}  // namespace rootflow
