#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "rootflow/poly.hpp"
#include "rootflow/roots.hpp"

namespace rootflow {

enum class AlignMethod { deflation, bottleneck };

const char* to_string(AlignMethod m) noexcept;

/// A bijection between the roots of f and of g (both lists expanded with
/// multiplicity). pairs[k] = (index into roots of f, index into roots of g).
struct Alignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<double> distances;
  double max_distance = 0.0;
  AlignMethod method = AlignMethod::bottleneck;

  /// g-index assigned to each f-index.
  std::vector<std::size_t> as_permutation() const;
};

struct AlignConfig {
  RootFinderConfig roots;
  /// Random points per deflation level for the division identity check.
  int identity_probes = 10;
  std::uint64_t seed = 0x0f1e2d3c4b5a6978ULL;
};

/// One induction step: the chosen root s of g, its partner r of f, and how
/// well (z−r)(f̂−ĝ) = f − g − ĝ·(s−r) held after deflating.
struct DeflationLevel {
  int degree = 0;
  Complex r;
  Complex s;
  /// max over probes of |lhs − rhs| / coefficient_scale
  double identity_residual = 0.0;
  double coefficient_scale = 0.0;
};

struct DeflationTrace {
  Alignment alignment;
  std::vector<DeflationLevel> levels;
  std::vector<Complex> roots_f;
  std::vector<Complex> roots_g;
};

/// Pairs roots by peeling them off one at a time: choose the root s of g
/// closest to a root r of f, deflate f at r and g at s, recurse on the
/// quotients; degree one closes with −b₀/b₁ and −a₀/a₁.
///
/// Root selection: smallest distance to the nearest f-root, ties broken by
/// (re, im). Pair indices refer to find_roots(f).expanded() and
/// find_roots(g).expanded().
Alignment align_by_deflation(const CPoly& f, const CPoly& g, const AlignConfig& cfg = {});
DeflationTrace align_by_deflation_traced(const CPoly& f, const CPoly& g,
                                         const AlignConfig& cfg = {});

/// Bijection minimizing the largest pair distance (binary search over the
/// candidate distances with an augmenting-path feasibility test). Among
/// bottleneck-optimal bijections the one with least total distance is
/// returned; remaining ties resolve towards lower indices.
Alignment align_bottleneck(std::span<const Complex> roots_f, std::span<const Complex> roots_g);
Alignment align_bottleneck(const RootSet& roots_f, const RootSet& roots_g);

inline double alignment_distance(const Alignment& a) noexcept { return a.max_distance; }

}  // namespace rootflow
