#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "rootflow/rational.hpp"

namespace rootflow {

using Complex = std::complex<double>;

/// Truncation order and coefficient zero-tolerance shared by a family of
/// series values.
struct SeriesConfig {
  Rational order{8};
  double tolerance = 1e-12;
};

enum class Magnitude { infinitesimal, finite, infinite };

const char* to_string(Magnitude m) noexcept;

/// A truncated generalized power series in a formal positive infinitesimal ε:
///
///     x = Σ c_k ε^{e_k} + (unknown terms of exponent > truncation_order)
///
/// with rational exponents e_k strictly increasing and complex coefficients
/// of magnitude above the tolerance. This is the computable part of the
/// hypercomplex field used by the rest of the library: valuation > 0 means
/// infinitesimal, valuation < 0 means infinite.
///
/// Every arithmetic operation tracks the order up to which its result is
/// provably correct. Multiplying by infinite values or dividing by
/// infinitesimal ones consumes known orders; an operation whose result no
/// longer determines its own magnitude class throws OrderExhausted.
///
/// Values are immutable after construction.
class HyperScalar {
 public:
  struct Term {
    Rational exponent;
    Complex coeff;
    friend bool operator==(const Term&, const Term&) = default;
  };

  /// The zero value at the default configuration.
  HyperScalar() = default;
  explicit HyperScalar(const SeriesConfig& cfg)
      : order_(cfg.order), cap_(cfg.order), tolerance_(cfg.tolerance) {}

  /// Builds a value from raw terms: sorts, merges equal exponents, drops terms
  /// below tolerance or above `order`. `cfg.order` becomes the order cap for
  /// later arithmetic; `order` defaults to it.
  static HyperScalar from_terms(std::vector<Term> terms, const SeriesConfig& cfg,
                                std::optional<Rational> order = std::nullopt);

  /// coeff · ε^exponent
  static HyperScalar monomial(Complex coeff, Rational exponent,
                              const SeriesConfig& cfg = {});

  std::span<const Term> terms() const noexcept { return terms_; }
  Rational truncation_order() const noexcept { return order_; }
  Rational order_cap() const noexcept { return cap_; }
  double tolerance() const noexcept { return tolerance_; }
  SeriesConfig config() const noexcept { return {cap_, tolerance_}; }

  bool is_zero() const noexcept { return terms_.empty(); }
  /// Least exponent carrying a coefficient; nullopt stands for +∞ (zero).
  std::optional<Rational> valuation() const noexcept;
  /// Coefficient at `exponent`, 0 if absent.
  Complex coefficient(Rational exponent) const noexcept;
  Complex leading_coefficient() const noexcept;

  Magnitude classify() const noexcept;
  bool is_infinitesimal() const noexcept {
    return classify() == Magnitude::infinitesimal;
  }
  bool is_finite() const noexcept { return classify() != Magnitude::infinite; }

  /// The ε⁰ coefficient. Throws InfiniteValue for infinite values.
  Complex standard_part() const;

  /// Substitutes ε = t > 0 into the stored terms.
  Complex evaluate_at(double t) const;

  /// Same value with knowledge discarded beyond `order`.
  HyperScalar truncated(Rational order) const;

  HyperScalar operator-() const;
  friend HyperScalar operator+(const HyperScalar& a, const HyperScalar& b);
  friend HyperScalar operator-(const HyperScalar& a, const HyperScalar& b);
  friend HyperScalar operator*(const HyperScalar& a, const HyperScalar& b);
  friend HyperScalar operator/(const HyperScalar& a, const HyperScalar& b);
  HyperScalar& operator+=(const HyperScalar& b) { return *this = *this + b; }
  HyperScalar& operator-=(const HyperScalar& b) { return *this = *this - b; }
  HyperScalar& operator*=(const HyperScalar& b) { return *this = *this * b; }
  HyperScalar& operator/=(const HyperScalar& b) { return *this = *this / b; }

  /// Term-wise equality of representation, coefficients compared within
  /// `tol` (absolute), up to the smaller truncation order of the two.
  bool same_terms(const HyperScalar& other, double tol) const;

 private:
  std::vector<Term> terms_;
  Rational order_{8};
  Rational cap_{8};
  double tolerance_ = 1e-12;

  void check_not_exhausted() const;
};

HyperScalar embed(Complex c, const SeriesConfig& cfg = {});
/// The formal infinitesimal ε itself.
HyperScalar epsilon(const SeriesConfig& cfg = {});

inline HyperScalar add(const HyperScalar& a, const HyperScalar& b) { return a + b; }
inline HyperScalar mul(const HyperScalar& a, const HyperScalar& b) { return a * b; }
inline HyperScalar neg(const HyperScalar& a) { return -a; }
inline HyperScalar div(const HyperScalar& a, const HyperScalar& b) { return a / b; }
inline std::optional<Rational> valuation(const HyperScalar& a) { return a.valuation(); }
inline Magnitude classify(const HyperScalar& a) { return a.classify(); }
inline Complex standard_part(const HyperScalar& a) { return a.standard_part(); }

/// a ≈ b: the difference is infinitesimal.
bool approx_eq(const HyperScalar& a, const HyperScalar& b);

}  // namespace rootflow
