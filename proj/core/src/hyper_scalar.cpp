#include "rootflow/hyper_scalar.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "rootflow/error.hpp"

namespace rootflow {
namespace {

// Coefficient accumulator keyed by exponent. `scale` is the largest magnitude
// that contributed, so cancellation noise is judged relative to it.
struct Accum {
  Complex sum{};
  double scale = 0.0;
};
using TermMap = std::map<Rational, Accum>;

std::vector<HyperScalar::Term> collect(const TermMap& acc, Rational order,
                                       double tol) {
  std::vector<HyperScalar::Term> out;
  out.reserve(acc.size());
  for (const auto& [e, a] : acc) {
    if (e > order) break;
    if (std::abs(a.sum) <= tol * std::max(1.0, a.scale)) continue;
    out.push_back({e, a.sum});
  }
  return out;
}

// Raw truncated product; used inside the reciprocal expansion.
std::vector<HyperScalar::Term> raw_mul(std::span<const HyperScalar::Term> a,
                                       std::span<const HyperScalar::Term> b,
                                       Rational order, double tol) {
  TermMap acc;
  for (const auto& x : a) {
    for (const auto& y : b) {
      const Rational e = x.exponent + y.exponent;
      if (e > order) break;  // b is sorted
      auto& slot = acc[e];
      slot.sum += x.coeff * y.coeff;
      slot.scale += std::abs(x.coeff) * std::abs(y.coeff);
    }
  }
  return collect(acc, order, tol);
}

}  // namespace

const char* to_string(Magnitude m) noexcept {
  switch (m) {
    case Magnitude::infinitesimal: return "infinitesimal";
    case Magnitude::finite: return "finite";
    case Magnitude::infinite: return "infinite";
  }
  return "?";
}

HyperScalar HyperScalar::from_terms(std::vector<Term> terms,
                                    const SeriesConfig& cfg,
                                    std::optional<Rational> order) {
  HyperScalar out(cfg);
  out.order_ = order.value_or(cfg.order);
  TermMap acc;
  for (const auto& t : terms) {
    auto& slot = acc[t.exponent];
    slot.sum += t.coeff;
    slot.scale = std::max(slot.scale, std::abs(t.coeff));
  }
  out.terms_ = collect(acc, out.order_, out.tolerance_);
  out.check_not_exhausted();
  return out;
}

HyperScalar HyperScalar::monomial(Complex coeff, Rational exponent,
                                  const SeriesConfig& cfg) {
  return from_terms({{exponent, coeff}}, cfg);
}

HyperScalar embed(Complex c, const SeriesConfig& cfg) {
  return HyperScalar::monomial(c, 0, cfg);
}

HyperScalar epsilon(const SeriesConfig& cfg) {
  return HyperScalar::monomial(1.0, 1, cfg);
}

void HyperScalar::check_not_exhausted() const {
  // With no surviving term and a negative order nothing is known about the
  // ε⁰ coefficient or below, so the magnitude class is undetermined.
  if (terms_.empty() && order_ < Rational(0)) {
    throw OrderExhausted("series lost all significant orders (known only to ε^" +
                         order_.to_string() + ")");
  }
}

std::optional<Rational> HyperScalar::valuation() const noexcept {
  if (terms_.empty()) return std::nullopt;
  return terms_.front().exponent;
}

Complex HyperScalar::coefficient(Rational exponent) const noexcept {
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), exponent,
      [](const Term& t, Rational e) { return t.exponent < e; });
  if (it != terms_.end() && it->exponent == exponent) return it->coeff;
  return {};
}

Complex HyperScalar::leading_coefficient() const noexcept {
  return terms_.empty() ? Complex{} : terms_.front().coeff;
}

Magnitude HyperScalar::classify() const noexcept {
  if (terms_.empty()) return Magnitude::infinitesimal;
  const Rational v = terms_.front().exponent;
  if (v > Rational(0)) return Magnitude::infinitesimal;
  if (v == Rational(0)) return Magnitude::finite;
  return Magnitude::infinite;
}

Complex HyperScalar::standard_part() const {
  if (classify() == Magnitude::infinite) {
    throw InfiniteValue("standard part is undefined for an infinite value (valuation " +
                        terms_.front().exponent.to_string() + ")");
  }
  return coefficient(0);
}

Complex HyperScalar::evaluate_at(double t) const {
  if (!(t > 0.0)) throw InvalidArgument("series can only be sampled at ε = t > 0");
  Complex sum{};
  for (const auto& term : terms_) {
    sum += term.coeff * std::pow(t, term.exponent.to_double());
  }
  if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag())) {
    throw InvalidArgument("series overflows at t = " + std::to_string(t));
  }
  return sum;
}

HyperScalar HyperScalar::truncated(Rational order) const {
  HyperScalar out = *this;
  out.order_ = std::min(order_, order);
  std::erase_if(out.terms_, [&](const Term& t) { return t.exponent > out.order_; });
  out.check_not_exhausted();
  return out;
}

HyperScalar HyperScalar::operator-() const {
  HyperScalar out = *this;
  for (auto& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

HyperScalar operator+(const HyperScalar& a, const HyperScalar& b) {
  HyperScalar out;
  out.cap_ = std::max(a.cap_, b.cap_);
  out.tolerance_ = std::max(a.tolerance_, b.tolerance_);
  out.order_ = std::min(a.order_, b.order_);
  TermMap acc;
  for (const auto* side : {&a, &b}) {
    for (const auto& t : side->terms_) {
      if (t.exponent > out.order_) break;
      auto& slot = acc[t.exponent];
      slot.sum += t.coeff;
      slot.scale = std::max(slot.scale, std::abs(t.coeff));
    }
  }
  out.terms_ = collect(acc, out.order_, out.tolerance_);
  out.check_not_exhausted();
  return out;
}

HyperScalar operator-(const HyperScalar& a, const HyperScalar& b) {
  return a + (-b);
}

HyperScalar operator*(const HyperScalar& a, const HyperScalar& b) {
  HyperScalar out;
  out.cap_ = std::max(a.cap_, b.cap_);
  out.tolerance_ = std::max(a.tolerance_, b.tolerance_);
  // a·b = A·B + A·O(b) + B·O(a): the unknown tail starts past
  // min(val(a) + K_b, val(b) + K_a).
  Rational order = out.cap_;
  if (auto va = a.valuation()) order = std::min(order, *va + b.order_);
  if (auto vb = b.valuation()) order = std::min(order, *vb + a.order_);
  out.order_ = order;
  out.terms_ = raw_mul(a.terms_, b.terms_, order, out.tolerance_);
  out.check_not_exhausted();
  return out;
}

HyperScalar operator/(const HyperScalar& a, const HyperScalar& b) {
  if (b.is_zero()) throw DivisionByZero();
  const Rational v = b.terms_.front().exponent;
  const Complex lead = b.terms_.front().coeff;
  const double tol = std::max(a.tolerance_, b.tolerance_);
  // b = lead·ε^v·(1 + u) with val(u) > 0, known to relative order P.
  const Rational rel = b.order_ - v;
  std::vector<HyperScalar::Term> neg_u;
  for (std::size_t k = 1; k < b.terms_.size(); ++k) {
    neg_u.push_back({b.terms_[k].exponent - v, -b.terms_[k].coeff / lead});
  }
  std::vector<HyperScalar::Term> sum{{Rational(0), Complex(1.0)}};
  if (!neg_u.empty()) {
    std::vector<HyperScalar::Term> power = sum;
    // Each power of u raises the valuation by at least its least exponent.
    const double steps =
        std::ceil(rel.to_double() / neg_u.front().exponent.to_double()) + 1;
    TermMap acc;
    acc[Rational(0)] = {Complex(1.0), 1.0};
    for (int k = 0; k < static_cast<int>(steps); ++k) {
      power = raw_mul(power, neg_u, rel, tol);
      if (power.empty()) break;
      for (const auto& t : power) {
        auto& slot = acc[t.exponent];
        slot.sum += t.coeff;
        slot.scale = std::max(slot.scale, std::abs(t.coeff));
      }
    }
    sum = collect(acc, rel, tol);
  }
  HyperScalar recip;
  recip.cap_ = b.cap_;
  recip.tolerance_ = b.tolerance_;
  recip.order_ = std::min(b.order_ - v - v, std::max(a.cap_, b.cap_));
  recip.terms_.reserve(sum.size());
  for (const auto& t : sum) {
    const Rational e = t.exponent - v;
    if (e > recip.order_) break;
    recip.terms_.push_back({e, t.coeff / lead});
  }
  recip.check_not_exhausted();
  return a * recip;
}

bool HyperScalar::same_terms(const HyperScalar& other, double tol) const {
  const Rational order = std::min(order_, other.order_);
  TermMap acc;
  for (const auto& t : terms_) {
    if (t.exponent <= order) acc[t.exponent].sum += t.coeff;
  }
  for (const auto& t : other.terms_) {
    if (t.exponent <= order) acc[t.exponent].sum -= t.coeff;
  }
  return std::all_of(acc.begin(), acc.end(),
                     [&](const auto& kv) { return std::abs(kv.second.sum) <= tol; });
}

bool approx_eq(const HyperScalar& a, const HyperScalar& b) {
  return (a - b).is_infinitesimal();
}

}  // namespace rootflow
