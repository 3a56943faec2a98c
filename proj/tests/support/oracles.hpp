#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's numerics.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace rootflow::testing {

using Complex = std::complex<double>;

/// Both roots of a·z² + b·z + c, cancellation-free.
inline std::pair<Complex, Complex> quadratic_roots(Complex a, Complex b, Complex c) {
  const Complex disc = std::sqrt(b * b - 4.0 * a * c);
  // Pick the sign that avoids cancellation in -b ∓ disc.
  const Complex q = -0.5 * (std::real(std::conj(b) * disc) >= 0.0 ? b + disc : b - disc);
  if (q == Complex{}) return {0.0, 0.0};
  return {q / a, c / q};
}

/// Ascending coefficients of lead·∏(z - r) by naive convolution.
inline std::vector<Complex> expand_roots(const std::vector<Complex>& roots, Complex lead = 1.0) {
  std::vector<Complex> c{lead};
  for (Complex r : roots) {
    std::vector<Complex> next(c.size() + 1);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = std::move(next);
  }
  return c;
}

/// Coefficients of (1 + x)^{1/2} = Σ C(1/2, k) x^k, k = 0…count-1.
inline std::vector<double> sqrt_binomial(int count) {
  std::vector<double> out;
  double c = 1.0;
  for (int k = 0; k < count; ++k) {
    out.push_back(c);
    c *= (0.5 - k) / (k + 1.0);
  }
  return out;
}

/// Minimum over all bijections of the largest |a_i - b_σ(i)|.
inline double brute_force_bottleneck(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[perm[i]]));
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline Complex random_in_disk(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(radius * std::sqrt(u(rng)), 2.0 * M_PI * u(rng));
}

/// n points in the disk of the given radius with pairwise distance ≥ sep
/// (rejection sampling).
inline std::vector<Complex> separated_points(std::mt19937_64& rng, int n, double sep, double radius) {
  std::vector<Complex> out;
  while (static_cast<int>(out.size()) < n) {
    const Complex z = random_in_disk(rng, radius);
    bool ok = true;
    for (Complex w : out) ok = ok && std::abs(z - w) >= sep;
    if (ok) out.push_back(z);
  }
  return out;
}

/// max-norm-1 complex vector.
inline std::vector<Complex> unit_direction(std::mt19937_64& rng, std::size_t size) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> v(size);
  double top = 0.0;
  for (auto& c : v) {
    c = {u(rng), u(rng)};
    top = std::max(top, std::abs(c));
  }
  for (auto& c : v) c /= top;
  return v;
}

/// Horner without the library.
inline Complex evaluate(const std::vector<Complex>& c, Complex z) {
  Complex acc{};
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
  return acc;
}

}  // namespace rootflow::testing
