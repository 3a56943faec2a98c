#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "rootflow/error.hpp"
#include "rootflow/hyper_scalar.hpp"

namespace rootflow {

inline constexpr double kDefaultTolerance = 1e-12;

/// Zero tests and embeddings for the two coefficient domains.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Complex> {
  static bool is_zero(const Complex& c, double tol) { return std::abs(c) <= tol; }
  static Complex from_complex(Complex c, const Complex&) { return c; }
};

template <>
struct ScalarTraits<HyperScalar> {
  static bool is_zero(const HyperScalar& c, double) { return c.is_zero(); }
  static HyperScalar from_complex(Complex c, const HyperScalar& like) {
    return embed(c, like.config());
  }
};

/// Dense polynomial a₀ + a₁z + … + aₙzⁿ, coefficients in ascending order.
/// The leading coefficient is nonzero; a constant is a degree-0 polynomial.
template <class T>
class Poly {
 public:
  using value_type = T;

  explicit Poly(std::vector<T> coeffs, double tolerance = kDefaultTolerance)
      : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw InvalidArgument("polynomial needs at least one coefficient");
    if (ScalarTraits<T>::is_zero(coeffs_.back(), tolerance)) {
      bool all_zero = true;
      for (const auto& c : coeffs_) all_zero = all_zero && ScalarTraits<T>::is_zero(c, tolerance);
      throw InvalidArgument(all_zero ? "zero polynomial"
                                     : "leading coefficient is zero");
    }
  }

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const T> coeffs() const noexcept { return coeffs_; }
  const T& operator[](std::size_t i) const { return coeffs_.at(i); }
  const T& leading() const noexcept { return coeffs_.back(); }

 private:
  std::vector<T> coeffs_;
};

using CPoly = Poly<Complex>;
using HPoly = Poly<HyperScalar>;

/// Horner evaluation over a raw coefficient span.
template <class T>
T horner(std::span<const T> coeffs, const T& z) {
  T acc = coeffs.back();
  for (std::size_t i = coeffs.size() - 1; i-- > 0;) acc = acc * z + coeffs[i];
  return acc;
}

template <class T>
T eval(const Poly<T>& p, const T& z) {
  return horner(p.coeffs(), z);
}

/// A complex polynomial evaluated at a series point, in series arithmetic.
inline HyperScalar eval(const CPoly& p, const HyperScalar& z) {
  const auto c = p.coeffs();
  HyperScalar acc = embed(c.back(), z.config());
  for (std::size_t i = c.size() - 1; i-- > 0;) acc = acc * z + embed(c[i], z.config());
  return acc;
}

/// Value and first derivative in one Horner pass.
template <class T>
std::pair<T, T> eval_with_derivative(std::span<const T> coeffs, const T& z) {
  T value = coeffs.back();
  T deriv = value - value;
  for (std::size_t i = coeffs.size() - 1; i-- > 0;) {
    deriv = deriv * z + value;
    value = value * z + coeffs[i];
  }
  return {value, deriv};
}

/// Taylor coefficients p^{(k)}(c)/k!, k = 0…n, by repeated synthetic division.
inline std::vector<Complex> taylor_coefficients(std::span<const Complex> coeffs, Complex c) {
  std::vector<Complex> work(coeffs.begin(), coeffs.end());
  const std::size_t n = work.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = n - 1; i > k; --i) work[i - 1] += c * work[i];
  }
  return work;
}

/// Σ |a_i| · r^i, the natural scale of rounding error when evaluating at |z| = r.
inline double abs_scale(std::span<const Complex> coeffs, double r) {
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * r + std::abs(coeffs[i]);
  return acc;
}

template <class T>
struct Deflation {
  Poly<T> quotient;
  T remainder;
};

/// Synthetic division: p(z) = (z - root)·quotient(z) + remainder exactly.
/// Requires degree ≥ 1.
template <class T>
Deflation<T> deflate(const Poly<T>& p, const T& root) {
  if (p.degree() < 1) throw InvalidArgument("cannot deflate a constant polynomial");
  const auto a = p.coeffs();
  const std::size_t n = a.size() - 1;
  std::vector<T> q(n, a[n]);
  T carry = a[n];
  for (std::size_t i = n; i-- > 1;) {
    carry = a[i] + carry * root;
    q[i - 1] = carry;
  }
  T remainder = a[0] + carry * root;
  // Leading coefficient of q is a_n, nonzero by invariant.
  return {Poly<T>(std::move(q), 0.0), std::move(remainder)};
}

/// Quotient of p by (z - root) computed forward (from the leading
/// coefficient) when |root| ≤ 1 and backward (from the constant term)
/// otherwise, which keeps the recurrence from amplifying rounding error.
inline CPoly deflate_stable(const CPoly& p, Complex root) {
  if (std::abs(root) <= 1.0 || p.degree() < 2) return deflate(p, root).quotient;
  const auto a = p.coeffs();
  const std::size_t n = a.size() - 1;
  std::vector<Complex> q(n);
  // a_0 = -root·q_0 and a_i = q_{i-1} - root·q_i.
  q[0] = -a[0] / root;
  for (std::size_t i = 1; i < n; ++i) q[i] = (q[i - 1] - a[i]) / root;
  // Exact leading coefficient: the mismatch lands in a_n only.
  q[n - 1] = a[n];
  return CPoly(std::move(q), 0.0);
}

/// Coefficient-wise product.
template <class T>
Poly<T> multiply(const Poly<T>& p, const Poly<T>& q) {
  const auto a = p.coeffs();
  const auto b = q.coeffs();
  std::vector<T> out(a.size() + b.size() - 1, a[0] - a[0]);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
  }
  return Poly<T>(std::move(out), 0.0);
}

/// a_n·∏(z - r_i) expanded to ascending coefficients.
inline CPoly from_roots(std::span<const Complex> roots, Complex leading = 1.0) {
  std::vector<Complex> c{leading};
  for (const Complex& r : roots) {
    c.push_back(0.0);
    for (std::size_t i = c.size() - 1; i > 0; --i) c[i] = c[i - 1] - r * c[i];
    c[0] = -r * c[0];
  }
  return CPoly(std::move(c));
}

}  // namespace rootflow
