#include "rootflow/io.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace rootflow::io {
namespace {

double parse_real(std::string_view s, std::size_t offset) {
  if (s.empty()) throw ParseError("empty number at offset " + std::to_string(offset), offset);
  std::size_t start = 0;
  if (s.front() == '+') start = 1;
  double value = 0.0;
  const char* first = s.data() + start;
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    const std::size_t at = offset + static_cast<std::size_t>(ptr - s.data());
    throw ParseError("invalid number '" + std::string(s) + "' at offset " + std::to_string(at), at);
  }
  return value;
}

Complex parse_complex_at(std::string_view s, std::size_t offset) {
  while (!s.empty() && s.front() == ' ') {
    s.remove_prefix(1);
    ++offset;
  }
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) throw ParseError("empty coefficient at offset " + std::to_string(offset), offset);
  if (s.back() != 'i' && s.back() != 'j') return {parse_real(s, offset), 0.0};

  const std::string_view body = s.substr(0, s.size() - 1);
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag_part = [&](std::string_view t, std::size_t at) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real(t, at);
  };
  if (split == std::string_view::npos) return {0.0, imag_part(body, offset)};
  return {parse_real(body.substr(0, split), offset),
          imag_part(body.substr(split), offset + split)};
}

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) throw ParseError(std::string("field \"") + what + "\" must be a number");
  return j.get<double>();
}

std::vector<Complex> complex_list(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of [re, im] pairs");
  std::vector<Complex> out;
  for (const auto& z : j) out.push_back(complex_from_json(z));
  return out;
}

json complex_list_json(std::span<const Complex> zs) {
  json arr = json::array();
  for (Complex z : zs) arr.push_back(to_json(z));
  return arr;
}

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer()) {
    return Rational(j[0].get<std::int64_t>(), j[1].get<std::int64_t>());
  }
  throw ParseError("rational must be an integer or [numerator, denominator]");
}

ItemStatus status_from_string(const std::string& s) {
  if (s == "pass") return ItemStatus::pass;
  if (s == "fail") return ItemStatus::fail;
  if (s == "info") return ItemStatus::info;
  throw ParseError("unknown item status \"" + s + "\"");
}

}  // namespace

Complex parse_complex(std::string_view text) { return parse_complex_at(text, 0); }

std::vector<Complex> parse_inline_coeffs(std::string_view text) {
  std::vector<Complex> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    const std::string_view tok =
        text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(parse_complex_at(tok, start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError("complex value must be [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json to_json(const HyperScalar& x) {
  json terms = json::array();
  for (const auto& t : x.terms()) {
    terms.push_back({t.exponent.num(), t.exponent.den(), t.coeff.real(), t.coeff.imag()});
  }
  const Rational k = x.truncation_order();
  return {{"terms", std::move(terms)}, {"order", {k.num(), k.den()}}};
}

HyperScalar hyper_from_json(const json& j, const SeriesConfig& defaults) {
  const json& terms = require(j, "terms");
  if (!terms.is_array()) throw ParseError("\"terms\" must be an array");
  std::vector<HyperScalar::Term> out;
  for (const auto& t : terms) {
    if (!t.is_array() || t.size() != 4 || !t[0].is_number_integer() || !t[1].is_number_integer() ||
        !t[2].is_number() || !t[3].is_number()) {
      throw ParseError("series term must be [numerator, denominator, re, im]");
    }
    if (t[1].get<std::int64_t>() == 0) throw ParseError("series exponent has zero denominator");
    out.push_back({Rational(t[0].get<std::int64_t>(), t[1].get<std::int64_t>()),
                   {t[2].get<double>(), t[3].get<double>()}});
  }
  SeriesConfig cfg = defaults;
  std::optional<Rational> order;
  if (j.contains("order")) order = rational_from_json(j.at("order"));
  if (order && *order > cfg.order) cfg.order = *order;
  return HyperScalar::from_terms(std::move(out), cfg, order.value_or(defaults.order));
}

json to_json(const CPoly& p) { return {{"coeffs", complex_list_json(p.coeffs())}}; }

CPoly poly_from_json(const json& j, double tolerance) {
  auto c = complex_list(require(j, "coeffs"));
  if (c.empty()) throw ParseError("\"coeffs\" is empty");
  if (std::abs(c.back()) <= tolerance) {
    bool all_zero = true;
    for (Complex z : c) all_zero = all_zero && std::abs(z) <= tolerance;
    throw ParseError(all_zero ? "zero polynomial" : "leading coefficient is zero (trailing zero in \"coeffs\")");
  }
  return CPoly(std::move(c), tolerance);
}

json to_json(const Deformation& d) {
  json paths = json::array();
  for (const auto& b : d.paths) paths.push_back(to_json(b));
  return {{"base", to_json(d.base)}, {"paths", std::move(paths)}, {"kind", to_string(d.kind)}};
}

Deformation deformation_from_json(const json& j, const SeriesConfig& defaults) {
  const CPoly base = poly_from_json(require(j, "base"), defaults.tolerance);
  const std::string kind = j.value("kind", std::string("series"));
  if (kind != "linear" && kind != "series" && kind != "polynomial") {
    throw ParseError("unknown deformation kind \"" + kind + "\"");
  }
  if (kind == "linear" && j.contains("directions")) {
    const auto dirs = complex_list(j.at("directions"));
    return Deformation::linear(base, dirs, defaults);
  }
  const json& paths = require(j, "paths");
  if (!paths.is_array()) throw ParseError("\"paths\" must be an array");
  std::vector<HyperScalar> out;
  for (const auto& p : paths) out.push_back(hyper_from_json(p, defaults));
  Deformation d = Deformation::series(base, std::move(out));
  d.kind = kind == "linear" ? DeformationKind::linear
           : kind == "polynomial" ? DeformationKind::polynomial
                                  : DeformationKind::series;
  return d;
}

json to_json(const RootSet& rs) {
  json roots = json::array();
  for (const auto& c : rs.clusters) {
    roots.push_back({{"value", to_json(c.center)},
                     {"multiplicity", c.multiplicity},
                     {"cluster_radius", c.radius}});
  }
  return {{"roots", std::move(roots)}, {"residual_bound", rs.residual_bound}};
}

RootSet rootset_from_json(const json& j) {
  RootSet rs;
  const json& roots = require(j, "roots");
  if (!roots.is_array()) throw ParseError("\"roots\" must be an array");
  for (const auto& r : roots) {
    RootCluster c;
    c.center = complex_from_json(require(r, "value"));
    const json& m = require(r, "multiplicity");
    if (!m.is_number_integer() || m.get<int>() < 1) throw ParseError("multiplicity must be a positive integer");
    c.multiplicity = m.get<int>();
    c.radius = number(require(r, "cluster_radius"), "cluster_radius");
    rs.clusters.push_back(c);
  }
  rs.residual_bound = number(require(j, "residual_bound"), "residual_bound");
  return rs;
}

json to_json(const Alignment& a) {
  json pairs = json::array();
  for (const auto& [i, k] : a.pairs) pairs.push_back({i, k});
  return {{"pairs", std::move(pairs)},
          {"distances", a.distances},
          {"max_distance", a.max_distance},
          {"method", to_string(a.method)}};
}

Alignment alignment_from_json(const json& j) {
  Alignment a;
  for (const auto& p : require(j, "pairs")) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_unsigned() || !p[1].is_number_unsigned()) {
      throw ParseError("pair must be [i, j] with non-negative integers");
    }
    a.pairs.emplace_back(p[0].get<std::size_t>(), p[1].get<std::size_t>());
  }
  for (const auto& d : require(j, "distances")) a.distances.push_back(number(d, "distances"));
  a.max_distance = number(require(j, "max_distance"), "max_distance");
  const auto method = require(j, "method").get<std::string>();
  if (method != "deflation" && method != "bottleneck") throw ParseError("unknown method \"" + method + "\"");
  a.method = method == "deflation" ? AlignMethod::deflation : AlignMethod::bottleneck;
  if (a.distances.size() != a.pairs.size()) throw ParseError("one distance per pair required");
  std::vector<char> seen_f(a.pairs.size()), seen_g(a.pairs.size());
  for (const auto& [i, k] : a.pairs) {
    if (i >= a.pairs.size() || k >= a.pairs.size() || seen_f[i] || seen_g[k]) {
      throw ParseError("pairs do not form a bijection");
    }
    seen_f[i] = seen_g[k] = 1;
  }
  return a;
}

json to_json(const LemmaReport& r) {
  json items = json::array();
  for (const auto& it : r.items) {
    items.push_back({{"name", it.name},
                     {"status", to_string(it.status)},
                     {"detail", it.detail},
                     {"witness", complex_list_json(it.witness)}});
  }
  json tol = json::object();
  for (const auto& [k, v] : r.tolerances) tol[k] = v;
  return {{"claim", r.claim}, {"passed", r.passed()}, {"items", std::move(items)}, {"tolerances", std::move(tol)}};
}

LemmaReport lemma_report_from_json(const json& j) {
  LemmaReport r;
  r.claim = require(j, "claim").get<std::string>();
  if (r.claim != "lemma1" && r.claim != "lemma2") throw ParseError("unknown claim \"" + r.claim + "\"");
  for (const auto& it : require(j, "items")) {
    ReportItem item;
    item.name = require(it, "name").get<std::string>();
    item.status = status_from_string(require(it, "status").get<std::string>());
    item.detail = require(it, "detail").get<std::string>();
    item.witness = complex_list(require(it, "witness"));
    r.items.push_back(std::move(item));
  }
  const json& tol = require(j, "tolerances");
  if (!tol.is_object()) throw ParseError("\"tolerances\" must be an object");
  for (const auto& [k, v] : tol.items()) r.tolerances.emplace_back(k, number(v, "tolerances"));
  if (require(j, "passed").get<bool>() != r.passed()) throw ParseError("\"passed\" disagrees with items");
  return r;
}

json to_json(const ModulusPoint& p) {
  return {{"epsilon", p.epsilon},
          {"delta", p.delta},
          {"distance_at_delta", p.distance_at_delta},
          {"witness", complex_list_json(p.witness)},
          {"samples", p.samples},
          {"seed", p.seed},
          {"saturated", p.saturated},
          {"monotonized", p.monotonized},
          {"status", p.status}};
}

ModulusPoint modulus_point_from_json(const json& j) {
  ModulusPoint p;
  p.epsilon = number(require(j, "epsilon"), "epsilon");
  p.delta = number(require(j, "delta"), "delta");
  p.distance_at_delta = number(require(j, "distance_at_delta"), "distance_at_delta");
  p.witness = complex_list(require(j, "witness"));
  p.samples = require(j, "samples").get<int>();
  p.seed = require(j, "seed").get<std::uint64_t>();
  p.saturated = require(j, "saturated").get<bool>();
  p.monotonized = require(j, "monotonized").get<bool>();
  p.status = require(j, "status").get<std::string>();
  return p;
}

json to_json(const ModulusCurve& c) {
  json pts = json::array();
  for (const auto& p : c.points) pts.push_back(to_json(p));
  return {{"points", std::move(pts)}, {"slope", c.slope}, {"seed", c.seed}};
}

ModulusCurve modulus_curve_from_json(const json& j) {
  ModulusCurve c;
  for (const auto& p : require(j, "points")) c.points.push_back(modulus_point_from_json(p));
  c.slope = number(require(j, "slope"), "slope");
  c.seed = require(j, "seed").get<std::uint64_t>();
  return c;
}

std::string to_csv(const ModulusCurve& c) {
  std::ostringstream os;
  os << "epsilon,delta,distance_at_delta,witness_json,samples,seed\n";
  for (const auto& p : c.points) {
    std::string witness = dump(complex_list_json(p.witness));
    os << dump(p.epsilon) << ',' << dump(p.delta) << ',' << dump(p.distance_at_delta) << ",\""
       << witness << "\"," << p.samples << ',' << p.seed << '\n';
  }
  return os.str();
}

json make_report(std::string_view kind, json payload) {
  payload["schema"] = std::string(kSchema);
  payload["kind"] = std::string(kind);
  return payload;
}

void validate_report(const json& report) {
  try {
    if (!report.is_object()) throw ParseError("report must be a JSON object");
    if (require(report, "schema").get<std::string>() != kSchema) {
      throw ParseError("unsupported schema version");
    }
    const auto kind = require(report, "kind").get<std::string>();
    if (kind == "roots") {
      poly_from_json(require(report, "polynomial"), 0.0);
      const RootSet rs = rootset_from_json(require(report, "root_set"));
      if (rs.total_multiplicity() != require(report, "degree").get<int>()) {
        throw ParseError("multiplicities do not sum to the degree");
      }
      if (report.contains("verify")) {
        const json& v = report.at("verify");
        rootset_from_json(require(v, "oracle"));
        number(require(v, "max_deviation"), "max_deviation");
        require(v, "agrees").get<bool>();
      }
    } else if (kind == "alignment") {
      complex_list(require(report, "roots_f"));
      complex_list(require(report, "roots_g"));
      const Alignment d = alignment_from_json(require(report, "deflation"));
      const Alignment b = alignment_from_json(require(report, "bottleneck"));
      if (d.method != AlignMethod::deflation || b.method != AlignMethod::bottleneck) {
        throw ParseError("alignment methods are mislabelled");
      }
      require(report, "agreement").get<bool>();
    } else if (kind == "lemma") {
      lemma_report_from_json(report);
    } else if (kind == "modulus_curve") {
      modulus_curve_from_json(report);
    } else {
      throw ParseError("unknown report kind \"" + kind + "\"");
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("schema violation: ") + e.what());
  }
}

std::string dump(const json& j) { return j.dump(); }

}  // namespace rootflow::io
