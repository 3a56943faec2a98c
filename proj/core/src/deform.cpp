#include "rootflow/deform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace rootflow {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Coefficient drop threshold used inside series Newton iterations.
constexpr double kLiftTolerance = 1e-14;

// Base coefficient a_i, zero past the base degree.
Complex base_coeff(const Deformation& d, std::size_t i) {
  const auto a = d.base.coeffs();
  return i < a.size() ? a[i] : Complex{};
}

bool vanishes_through(const HyperScalar& x, Rational order) {
  if (x.truncation_order() < order) return false;
  const auto v = x.valuation();
  return !v || *v > order;
}

HyperScalar abs_terms(const HyperScalar& x) {
  std::vector<HyperScalar::Term> terms;
  for (const auto& t : x.terms()) terms.push_back({t.exponent, std::abs(t.coeff)});
  return HyperScalar::from_terms(std::move(terms), x.config(), x.truncation_order());
}

// g(s) vanishes through `order` up to the series resolution: every
// coefficient is dropped below tolerance·scale during arithmetic, where the
// scale here is the largest coefficient of Σ |b_i|·|s|^i through `order`.
bool residual_negligible(const HyperScalar& gs, const Deformation& d, const HyperScalar& s,
                         Rational order) {
  if (gs.truncation_order() < order) return false;
  if (vanishes_through(gs, order)) return true;
  std::vector<HyperScalar> mags;
  for (const auto& b : d.paths) mags.push_back(abs_terms(b));
  double scale = 1.0;
  for (const auto& t : horner(std::span<const HyperScalar>(mags), abs_terms(s)).terms()) {
    if (t.exponent <= order) scale = std::max(scale, std::abs(t.coeff));
  }
  for (const auto& t : gs.terms()) {
    if (t.exponent <= order && std::abs(t.coeff) > 16.0 * gs.tolerance() * scale) return false;
  }
  return true;
}

std::string describe(Complex z) {
  std::ostringstream os;
  os.precision(6);
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

void check_ladder(std::span<const double> ladder) {
  if (ladder.empty()) throw InvalidArgument("ladder is empty");
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    if (!(ladder[k] > 0.0 && ladder[k] <= 1.0)) throw InvalidArgument("ladder values must lie in (0, 1]");
    if (k > 0 && !(ladder[k] < ladder[k - 1])) throw InvalidArgument("ladder must be strictly decreasing");
  }
}

// Least-squares fit z ≈ c₀ + c₁·x over the given samples; returns (c₀, rms).
std::pair<Complex, double> fit_limit(std::span<const double> x, std::span<const Complex> z) {
  const double n = static_cast<double>(x.size());
  if (x.size() == 1) return {z[0], 0.0};
  double sx = 0, sxx = 0;
  Complex sz{}, sxz{};
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sxx += x[k] * x[k];
    sz += z[k];
    sxz += x[k] * z[k];
  }
  const double det = n * sxx - sx * sx;
  Complex c0 = sz / n, c1{};
  if (det > 0.0) {
    c0 = (sxx * sz - sx * sxz) / det;
    c1 = (n * sxz - sx * sz) / det;
  }
  double ss = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) ss += std::norm(z[k] - c0 - c1 * x[k]);
  return {c0, std::sqrt(ss / n)};
}

}  // namespace

const char* to_string(DeformationKind k) noexcept {
  switch (k) {
    case DeformationKind::linear: return "linear";
    case DeformationKind::polynomial: return "polynomial";
    case DeformationKind::series: return "series";
  }
  return "?";
}

const char* to_string(ItemStatus s) noexcept {
  switch (s) {
    case ItemStatus::pass: return "pass";
    case ItemStatus::fail: return "fail";
    case ItemStatus::info: return "info";
  }
  return "?";
}

Deformation Deformation::linear(const CPoly& base, std::span<const Complex> directions,
                                const SeriesConfig& cfg) {
  if (directions.size() < base.coeffs().size()) {
    throw InvalidArgument("linear deformation needs one direction per coefficient");
  }
  std::vector<HyperScalar> paths;
  for (std::size_t i = 0; i < directions.size(); ++i) {
    const Complex a = i < base.coeffs().size() ? base[i] : Complex{};
    paths.push_back(HyperScalar::from_terms({{0, a}, {1, directions[i]}}, cfg));
  }
  return {base, std::move(paths), DeformationKind::linear};
}

Deformation Deformation::polynomial(const CPoly& base, const std::vector<std::vector<Complex>>& c,
                                    const SeriesConfig& cfg) {
  std::vector<HyperScalar> paths;
  for (const auto& row : c) {
    std::vector<HyperScalar::Term> terms;
    for (std::size_t k = 0; k < row.size(); ++k) {
      terms.push_back({static_cast<std::int64_t>(k), row[k]});
    }
    paths.push_back(HyperScalar::from_terms(std::move(terms), cfg));
  }
  Deformation d = series(base, std::move(paths));
  d.kind = DeformationKind::polynomial;
  return d;
}

Deformation Deformation::series(const CPoly& base, std::vector<HyperScalar> paths) {
  if (paths.size() < base.coeffs().size()) {
    throw InvalidArgument("deformation needs " + std::to_string(base.coeffs().size()) +
                          " coefficient paths, got " + std::to_string(paths.size()));
  }
  return {base, std::move(paths), DeformationKind::series};
}

bool is_infinitesimal_deformation(const Deformation& d) {
  for (std::size_t i = 0; i < d.paths.size(); ++i) {
    if (!approx_eq(d.paths[i], embed(base_coeff(d, i), d.paths[i].config()))) return false;
  }
  return true;
}

bool leading_is_standard(const Deformation& d) {
  return d.paths.size() == d.base.coeffs().size() &&
         d.paths.back().classify() == Magnitude::finite && is_infinitesimal_deformation(d);
}

CPoly sample_at(const Deformation& d, double t) {
  if (!(t > 0.0 && t <= 1.0)) throw InvalidArgument("sample_at needs 0 < t <= 1");
  std::vector<Complex> c;
  c.reserve(d.paths.size());
  for (const auto& b : d.paths) c.push_back(b.evaluate_at(t));
  return CPoly(std::move(c), 0.0);
}

HyperScalar eval_deformation(const Deformation& d, const HyperScalar& z) {
  return horner(std::span<const HyperScalar>(d.paths), z);
}

HyperScalar hensel_lift_root(const Deformation& d, Complex r, Rational order,
                             const HenselConfig& cfg) {
  const auto a = d.base.coeffs();
  const double scale = abs_scale(a, std::max(1.0, std::abs(r)));
  auto [fv, fd] = eval_with_derivative(a, r);
  if (std::abs(fd) <= cfg.simple_root_threshold * scale) {
    throw NotSimpleRoot("f'(r) is negligible at r = " + describe(r) +
                        "; use root_trajectories for multiple roots");
  }
  if (std::abs(fv) > cfg.residual_tolerance * scale) {
    throw InvalidArgument("r = " + describe(r) + " is not a root of the base polynomial");
  }
  if (d.paths.size() != a.size()) {
    throw InvalidArgument("lifting needs a deformation of the same degree as its base");
  }
  // Polish in complex arithmetic before lifting.
  for (int k = 0; k < 3; ++k) {
    const Complex step = fv / fd;
    if (!(std::abs(step) > 0.0)) break;
    const Complex next = r - step;
    const auto [nv, nd] = eval_with_derivative(a, next);
    if (std::abs(nv) >= std::abs(fv)) break;
    r = next;
    fv = nv;
    fd = nd;
  }

  Rational known = d.paths.front().truncation_order();
  for (const auto& b : d.paths) known = std::min(known, b.truncation_order());
  if (order > known) {
    throw OrderExhausted("requested order " + order.to_string() +
                         " exceeds the coefficient truncation order " + known.to_string());
  }

  // Lift at a finer coefficient tolerance so that dropped terms do not
  // accumulate into the result; hand back the caller's configuration.
  const SeriesConfig outer = d.paths.back().config();
  const SeriesConfig inner{outer.order, std::min(outer.tolerance, kLiftTolerance)};
  Deformation fine = d;
  for (auto& b : fine.paths) b = HyperScalar::from_terms({b.terms().begin(), b.terms().end()}, inner, b.truncation_order());

  std::vector<HyperScalar> dpaths;
  for (std::size_t i = 1; i < fine.paths.size(); ++i) {
    dpaths.push_back(embed(static_cast<double>(i), inner) * fine.paths[i]);
  }

  HyperScalar s = embed(r, inner);
  for (int step = 0; step < cfg.max_steps; ++step) {
    const HyperScalar gs = eval_deformation(fine, s);
    if (residual_negligible(gs, fine, s, order)) {
      return HyperScalar::from_terms({s.terms().begin(), s.terms().end()}, outer, s.truncation_order());
    }
    const HyperScalar gds = horner(std::span<const HyperScalar>(dpaths), s);
    s = s - gs / gds;
  }
  throw NonConvergence("series Newton iteration did not reach order " + order.to_string(),
                       {s.standard_part()});
}

std::vector<double> default_ladder() { return {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}; }

TrajectoryResult root_trajectories(const Deformation& d, const DeformConfig& cfg) {
  check_ladder(cfg.ladder);
  TrajectoryResult out;
  out.ladder = cfg.ladder;
  out.base_roots = find_roots(d.base, cfg.roots);

  std::vector<std::vector<Complex>> sampled;
  for (double t : cfg.ladder) {
    const RootSet rs = find_roots(sample_at(d, t), cfg.roots);
    out.root_residual_bound = std::max(out.root_residual_bound, rs.residual_bound);
    sampled.push_back(rs.expanded());
  }

  const std::size_t count = sampled.front().size();
  out.trajectories.resize(count);
  for (std::size_t i = 0; i < count; ++i) out.trajectories[i].points.push_back(sampled[0][i]);

  for (std::size_t k = 1; k < sampled.size(); ++k) {
    std::vector<Complex> ends;
    for (const auto& tr : out.trajectories) ends.push_back(tr.points.back());
    const auto perm = align_bottleneck(ends, sampled[k]).as_permutation();
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = perm[i];
      const double chosen = std::abs(ends[i] - sampled[k][j]);
      for (std::size_t alt = 0; alt < count; ++alt) {
        if (alt == j) continue;
        const double other = std::abs(ends[i] - sampled[k][alt]);
        if (sampled[k][alt] != sampled[k][j] &&
            std::abs(other - chosen) <= cfg.tie_tolerance * std::max(chosen, 1e-300)) {
          out.ambiguities.push_back({k, i, j, alt});
        }
      }
      out.trajectories[i].points.push_back(sampled[k][j]);
    }
  }

  const std::size_t tail = std::min<std::size_t>(3, cfg.ladder.size());
  for (auto& tr : out.trajectories) {
    const Complex last = tr.points.back();
    const RootCluster* nearest = nullptr;
    for (const auto& c : out.base_roots.clusters) {
      if (!nearest || std::abs(c.center - last) < std::abs(nearest->center - last)) nearest = &c;
    }
    tr.multiplicity = nearest ? nearest->multiplicity : 1;
    std::vector<double> x;
    std::vector<Complex> z;
    for (std::size_t k = cfg.ladder.size() - tail; k < cfg.ladder.size(); ++k) {
      x.push_back(std::pow(cfg.ladder[k], 1.0 / tr.multiplicity));
      z.push_back(tr.points[k]);
    }
    std::tie(tr.limit, tr.fit_residual) = fit_limit(x, z);
    tr.nearest_base_root = nearest ? nearest->center : Complex{};
    // Re-resolve against the extrapolated limit.
    for (const auto& c : out.base_roots.clusters) {
      if (std::abs(c.center - tr.limit) < std::abs(tr.nearest_base_root - tr.limit)) {
        tr.nearest_base_root = c.center;
      }
    }
    tr.distance_to_base = nearest ? std::abs(tr.limit - tr.nearest_base_root) : kInf;
  }
  return out;
}

bool LemmaReport::passed() const noexcept {
  return std::none_of(items.begin(), items.end(),
                      [](const ReportItem& it) { return it.status == ItemStatus::fail; });
}

std::vector<Complex> chebyshev_points(int count) {
  std::vector<Complex> out;
  for (int k = 0; k < count; ++k) {
    out.emplace_back(std::cos(std::numbers::pi * (2.0 * k + 1.0) / (2.0 * count)), 0.0);
  }
  return out;
}

std::vector<HyperScalar> interpolate(std::span<const Complex> points,
                                     std::span<const HyperScalar> values) {
  const std::size_t m = points.size();
  if (values.size() != m || m == 0) throw InvalidArgument("interpolation needs one value per point");
  std::vector<std::vector<Complex>> v(m, std::vector<Complex>(m));
  double norm = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    Complex p = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      v[k][i] = p;
      norm = std::max(norm, std::abs(p));
      p *= points[k];
    }
  }
  std::vector<HyperScalar> rhs(values.begin(), values.end());
  const SeriesConfig cfg = rhs.front().config();

  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t row = col + 1; row < m; ++row) {
      if (std::abs(v[row][col]) > std::abs(v[piv][col])) piv = row;
    }
    if (std::abs(v[piv][col]) <= 1e-13 * norm) {
      throw SingularSystem("interpolation nodes are too close (pivot " +
                           std::to_string(std::abs(v[piv][col])) + ")");
    }
    std::swap(v[piv], v[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t row = col + 1; row < m; ++row) {
      const Complex factor = v[row][col] / v[col][col];
      if (factor == Complex{}) continue;
      for (std::size_t i = col; i < m; ++i) v[row][i] -= factor * v[col][i];
      rhs[row] = rhs[row] - embed(factor, cfg) * rhs[col];
    }
  }
  std::vector<HyperScalar> c(m);
  for (std::size_t i = m; i-- > 0;) {
    HyperScalar acc = rhs[i];
    for (std::size_t j = i + 1; j < m; ++j) acc = acc - embed(v[i][j], cfg) * c[j];
    c[i] = acc / embed(v[i][i], cfg);
  }
  return c;
}

LemmaReport check_lemma1(const Deformation& d, std::span<const Complex> points,
                         const DeformConfig& /*cfg*/) {
  const std::size_t n = d.paths.size() - 1;
  if (points.size() < n + 1) {
    throw InvalidArgument("need at least n+1 = " + std::to_string(n + 1) + " sample points");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (points[i] == points[j]) throw InvalidArgument("sample points must be pairwise distinct");
    }
  }

  LemmaReport report;
  report.claim = "lemma1";
  const SeriesConfig cfg = d.paths.back().config();
  report.tolerances = {{"series_tolerance", cfg.tolerance},
                       {"truncation_order", cfg.order.to_double()}};

  const bool deformation = is_infinitesimal_deformation(d);
  {
    ReportItem it{"hypothesis: coefficients b_i ~ a_i", ItemStatus::info, "", {}};
    std::string bad;
    for (std::size_t i = 0; i < d.paths.size(); ++i) {
      if (!approx_eq(d.paths[i], embed(base_coeff(d, i), cfg))) {
        bad += (bad.empty() ? "" : ",") + std::to_string(i);
      }
    }
    it.detail = deformation ? "infinitesimal deformation" : "coefficients not ~ a_i at indices " + bad;
    report.items.push_back(std::move(it));
  }

  std::vector<HyperScalar> values;
  std::vector<Complex> far_points;
  std::vector<Complex> infinite_points;
  for (Complex z : points) {
    values.push_back(eval_deformation(d, embed(z, cfg)));
    const HyperScalar fz = embed(horner(d.base.coeffs(), z), cfg);
    if (!approx_eq(values.back(), fz)) far_points.push_back(z);
    if (values.back().classify() == Magnitude::infinite) infinite_points.push_back(z);
  }
  const bool close_everywhere = far_points.empty();

  // (iii) ⇒ (ii)
  if (deformation) {
    report.items.push_back({"(iii)=>(ii): g(z) ~ f(z) at sample points",
                            close_everywhere ? ItemStatus::pass : ItemStatus::fail,
                            close_everywhere ? "all " + std::to_string(points.size()) + " points"
                                             : std::to_string(far_points.size()) + " points differ",
                            far_points});
  } else {
    report.items.push_back({"(iii)=>(ii): g(z) ~ f(z) at sample points", ItemStatus::info,
                            "hypothesis (iii) does not hold", {}});
  }

  // (ii) ⇒ (iii) through exact interpolation of the sampled values.
  const auto recovered = interpolate(points, values);
  {
    ReportItem it{"(ii)=>(iii): interpolated coefficients ~ a_i", ItemStatus::pass, "", {}};
    if (close_everywhere) {
      std::string bad;
      for (std::size_t i = 0; i < recovered.size(); ++i) {
        if (!approx_eq(recovered[i], embed(base_coeff(d, i), cfg))) {
          bad += (bad.empty() ? "" : ",") + std::to_string(i);
          it.witness.push_back(recovered[i].coefficient(0));
        }
      }
      it.status = bad.empty() ? ItemStatus::pass : ItemStatus::fail;
      it.detail = bad.empty() ? "g ~ f at every point and every recovered b_i ~ a_i"
                              : "recovered coefficients not ~ a_i at indices " + bad;
    } else {
      // Contrapositive: not a deformation, so (ii) must fail somewhere.
      it.status = deformation ? ItemStatus::fail : ItemStatus::pass;
      it.detail = "(ii) fails at " + std::to_string(far_points.size()) + " sample points";
      it.witness = far_points;
    }
    report.items.push_back(std::move(it));
  }

  {
    const double tol = std::max(1e3 * cfg.tolerance, 1e-10);
    ReportItem it{"interpolation reproduces the coefficient paths", ItemStatus::pass, "", {}};
    std::string bad;
    for (std::size_t i = 0; i < recovered.size(); ++i) {
      const HyperScalar stored = i < d.paths.size() ? d.paths[i] : HyperScalar(cfg);
      double scale = 1.0;
      for (const auto& t : stored.terms()) scale = std::max(scale, std::abs(t.coeff));
      if (!recovered[i].same_terms(stored, tol * scale)) bad += (bad.empty() ? "" : ",") + std::to_string(i);
    }
    it.status = bad.empty() ? ItemStatus::pass : ItemStatus::fail;
    it.detail = bad.empty() ? "term-by-term match" : "mismatch at indices " + bad;
    report.tolerances.emplace_back("interpolation_tolerance", tol);
    report.items.push_back(std::move(it));
  }

  {
    bool has_infinite = false;
    for (const auto& b : d.paths) has_infinite = has_infinite || b.classify() == Magnitude::infinite;
    if (has_infinite) {
      const bool seen = !infinite_points.empty();
      report.items.push_back({"finite-coefficient clause: some g(z) infinite",
                              seen ? ItemStatus::pass : ItemStatus::fail,
                              seen ? "infinite value at " + describe(infinite_points.front())
                                   : "no sample evaluation was infinite",
                              infinite_points});
    } else {
      report.items.push_back({"finite-coefficient clause: some g(z) infinite", ItemStatus::info,
                              "all coefficients finite", {}});
    }
  }
  return report;
}

LemmaReport check_lemma2(const Deformation& d, const DeformConfig& cfg) {
  LemmaReport report;
  report.claim = "lemma2";
  const bool deformation = is_infinitesimal_deformation(d);
  const bool applicable = leading_is_standard(d);
  const bool leading_small = d.paths.back().classify() == Magnitude::infinitesimal;

  report.items.push_back({"hypothesis: infinitesimal deformation", ItemStatus::info,
                          deformation ? "b_i ~ a_i for every i" : "some b_i is not ~ a_i", {}});
  report.items.push_back({"hypothesis: st(b_n) = a_n != 0", ItemStatus::info,
                          applicable ? "holds" : (leading_small ? "violated: b_n is infinitesimal"
                                                                : "does not hold"),
                          {}});

  const TrajectoryResult tr = root_trajectories(d, cfg);
  report.tolerances = {{"root_residual_bound", tr.root_residual_bound},
                       {"tie_tolerance", cfg.tie_tolerance}};

  for (const auto& amb : tr.ambiguities) {
    report.items.push_back({"pairing ambiguity", ItemStatus::info,
                            "ladder step " + std::to_string(amb.ladder_index) + ", trajectory " +
                                std::to_string(amb.trajectory) + ": root " + std::to_string(amb.chosen) +
                                " tied with root " + std::to_string(amb.alternative),
                            {}});
  }

  if (applicable) {
    // Cauchy bound uniform over the ladder.
    double top = 0.0, lead = kInf;
    for (double t : cfg.ladder) {
      const CPoly g = sample_at(d, t);
      for (int i = 0; i < g.degree(); ++i) top = std::max(top, std::abs(g[static_cast<std::size_t>(i)]));
      lead = std::min(lead, std::abs(g.leading()));
    }
    const double bound = 1.0 + top / lead;
    double worst = 0.0;
    Complex worst_point;
    for (const auto& t : tr.trajectories) {
      for (Complex z : t.points) {
        if (std::abs(z) > worst) {
          worst = std::abs(z);
          worst_point = z;
        }
      }
    }
    report.items.push_back({"finiteness: roots stay bounded along the ladder",
                            worst <= bound ? ItemStatus::pass : ItemStatus::fail,
                            "max |s| = " + std::to_string(worst) + " <= bound " + std::to_string(bound),
                            {worst_point}});
    report.tolerances.emplace_back("finiteness_bound", bound);

    for (std::size_t i = 0; i < tr.trajectories.size(); ++i) {
      const auto& t = tr.trajectories[i];
      double radius = 0.0;
      for (const auto& c : tr.base_roots.clusters) {
        if (c.center == t.nearest_base_root) radius = c.radius;
      }
      const double tol = cfg.limit_tolerance > 0.0
                             ? cfg.limit_tolerance
                             : 10.0 * (t.fit_residual + radius +
                                       tr.root_residual_bound * std::max(1.0, std::abs(t.limit)));
      const bool ok = t.distance_to_base <= tol;
      std::ostringstream detail;
      detail << "trajectory " << i << ": limit " << describe(t.limit) << ", nearest root "
             << describe(t.nearest_base_root) << ", distance " << t.distance_to_base
             << " (tolerance " << tol << ")";
      report.items.push_back({"limit is a root of f", ok ? ItemStatus::pass : ItemStatus::fail,
                              detail.str(), {t.limit, t.nearest_base_root}});
    }
  } else if (leading_small) {
    // |s(t)|·t must not shrink as t → 0 for some trajectory.
    std::size_t witness = tr.trajectories.size();
    for (std::size_t i = 0; i < tr.trajectories.size() && witness == tr.trajectories.size(); ++i) {
      const auto& pts = tr.trajectories[i].points;
      const double first = std::abs(pts.front()) * cfg.ladder.front();
      bool grows = first > 0.0;
      for (std::size_t k = 0; k < pts.size(); ++k) {
        grows = grows && std::abs(pts[k]) * cfg.ladder[k] >= 0.5 * first;
      }
      if (grows) witness = i;
    }
    const bool seen = witness < tr.trajectories.size();
    ReportItem it{"hypothesis violation: divergent trajectory", ItemStatus::info, "", {}};
    if (seen) {
      it.detail = "trajectory " + std::to_string(witness) + " grows like 1/t (|s| = " +
                  std::to_string(std::abs(tr.trajectories[witness].points.back())) + " at t = " +
                  std::to_string(cfg.ladder.back()) + ")";
      it.witness = tr.trajectories[witness].points;
    } else {
      it.detail = "no trajectory grows like 1/t";
      // An infinitesimal deformation with a vanishing leading term must lose roots to infinity.
      if (deformation) it.status = ItemStatus::fail;
    }
    report.items.push_back(std::move(it));
  } else {
    report.items.push_back({"limit is a root of f", ItemStatus::info,
                            "hypotheses not met; no claim is made", {}});
  }
  return report;
}

}  // namespace rootflow
