#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "rootflow/align.hpp"
#include "rootflow/continuity.hpp"
#include "rootflow/deform.hpp"
#include "rootflow/io.hpp"
#include "rootflow/roots.hpp"

namespace rootflow::cli {
namespace {

using io::json;

/// Oracle deviation above which --verify reports a disagreement.
constexpr double kVerifyTolerance = 1e-8;
/// Perturbations per modulus point in the --verify soundness re-check.
constexpr int kSoundnessSamples = 500;

struct RunConfig {
  double tolerance = kDefaultTolerance;
  int order = 8;
  std::string ladder;
  std::uint64_t seed = 20240601;
  int samples = 64;
  std::string format = "json";
  bool verify = false;
  std::string out;

  std::vector<double> ladder_values() const {
    if (ladder.empty()) return default_ladder();
    std::vector<double> v;
    for (Complex c : io::parse_inline_coeffs(ladder)) {
      if (c.imag() != 0.0) throw io::ParseError("ladder values must be real");
      v.push_back(c.real());
    }
    return v;
  }

  void validate() const {
    if (!(tolerance > 0.0)) throw InvalidArgument("--tolerance must be positive");
    if (order < 2) throw InvalidArgument("--order must be at least 2");
    if (samples < 1) throw InvalidArgument("--samples must be positive");
    const auto lv = ladder_values();
    if (lv.empty()) throw InvalidArgument("--ladder needs at least one value");
    for (std::size_t i = 0; i < lv.size(); ++i) {
      if (!(lv[i] > 0.0 && lv[i] <= 1.0)) throw InvalidArgument("--ladder values must lie in (0, 1]");
      if (i > 0 && !(lv[i] < lv[i - 1])) throw InvalidArgument("--ladder must be strictly decreasing");
    }
  }

  SeriesConfig series() const { return {Rational(order), tolerance}; }

  RootFinderConfig roots() const {
    RootFinderConfig rc;
    rc.tolerance = tolerance;
    return rc;
  }
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io::ParseError("cannot open \"" + path + "\"");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw io::ParseError(path + ": " + e.what());
  }
}

CPoly load_poly(const std::string& file, const std::string& inline_text, const RunConfig& rc,
                const char* what) {
  if (!file.empty() && !inline_text.empty()) {
    throw InvalidArgument(std::string("give ") + what + " either as a file or inline, not both");
  }
  if (!inline_text.empty()) return CPoly(io::parse_inline_coeffs(inline_text), rc.tolerance);
  if (file.empty()) throw InvalidArgument(std::string("missing polynomial ") + what);
  return io::poly_from_json(read_json_file(file), rc.tolerance);
}

json complex_array(std::span<const Complex> zs) {
  json a = json::array();
  for (Complex z : zs) a.push_back(io::to_json(z));
  return a;
}

json config_json(const RunConfig& rc) {
  return {{"tolerance", rc.tolerance}, {"order", rc.order}, {"seed", rc.seed}, {"samples", rc.samples}};
}

struct Emitted {
  std::string text;
  int code = kPass;
};

Emitted cmd_roots(const RunConfig& rc, const std::string& file, const std::string& inline_text) {
  const CPoly p = load_poly(file, inline_text, rc, "");
  if (p.degree() < 1) throw InvalidArgument("polynomial must have degree at least 1");
  const RootSet rs = find_roots(p, rc.roots());
  json report{{"polynomial", io::to_json(p)}, {"degree", p.degree()}, {"root_set", io::to_json(rs)},
              {"config", config_json(rc)}};
  int code = kPass;
  if (rc.verify) {
    const RootSet oracle = roots_oracle(p, rc.roots());
    const double dev = align_bottleneck(rs, oracle).max_distance;
    const bool agrees = dev <= kVerifyTolerance;
    report["verify"] = {{"oracle", io::to_json(oracle)}, {"max_deviation", dev}, {"agrees", agrees},
                        {"tolerance", kVerifyTolerance}};
    if (!agrees) code = kCheckFailed;
  }
  return {io::dump(io::make_report("roots", std::move(report))) + "\n", code};
}

Emitted cmd_align(const RunConfig& rc, const std::vector<std::string>& files, const std::string& f_inline,
                  const std::string& g_inline) {
  const std::string f_file = files.size() > 0 ? files[0] : "";
  const std::string g_file = files.size() > 1 ? files[1] : "";
  if (files.size() > 2) throw InvalidArgument("align takes at most two polynomial files");
  // With one positional file and one inline polynomial, the file is whichever is missing.
  const bool f_from_file = f_inline.empty();
  const CPoly f = load_poly(f_from_file ? f_file : "", f_inline, rc, "f");
  const CPoly g = load_poly(f_from_file ? g_file : f_file, g_inline, rc, "g");

  AlignConfig ac;
  ac.roots = rc.roots();
  ac.seed = rc.seed;
  const DeflationTrace trace = align_by_deflation_traced(f, g, ac);
  const Alignment bott = align_bottleneck(trace.roots_f, trace.roots_g);
  const bool agreement = trace.alignment.as_permutation() == bott.as_permutation();

  json levels = json::array();
  for (const auto& l : trace.levels) {
    levels.push_back({{"degree", l.degree},
                      {"r", io::to_json(l.r)},
                      {"s", io::to_json(l.s)},
                      {"identity_residual", l.identity_residual},
                      {"coefficient_scale", l.coefficient_scale}});
  }
  json report{{"f", io::to_json(f)},
              {"g", io::to_json(g)},
              {"roots_f", complex_array(trace.roots_f)},
              {"roots_g", complex_array(trace.roots_g)},
              {"deflation", io::to_json(trace.alignment)},
              {"bottleneck", io::to_json(bott)},
              {"agreement", agreement},
              {"levels", std::move(levels)},
              {"config", config_json(rc)}};
  int code = kPass;
  if (rc.verify) {
    const double dev_f = align_bottleneck(find_roots(f, rc.roots()), roots_oracle(f, rc.roots())).max_distance;
    const double dev_g = align_bottleneck(find_roots(g, rc.roots()), roots_oracle(g, rc.roots())).max_distance;
    const double dev = std::max(dev_f, dev_g);
    report["verify"] = {{"max_deviation", dev}, {"agrees", dev <= kVerifyTolerance},
                        {"tolerance", kVerifyTolerance}};
    if (dev > kVerifyTolerance) code = kCheckFailed;
  }
  return {io::dump(io::make_report("alignment", std::move(report))) + "\n", code};
}

Emitted cmd_lemma(const RunConfig& rc, const std::string& file, int which, const std::string& points) {
  if (file.empty()) throw InvalidArgument("lemma needs a deformation file");
  const Deformation d = io::deformation_from_json(read_json_file(file), rc.series());
  DeformConfig dc;
  dc.ladder = rc.ladder_values();
  dc.roots = rc.roots();

  LemmaReport r;
  if (which == 1) {
    const auto pts = points.empty() ? chebyshev_points(static_cast<int>(d.paths.size()))
                                    : io::parse_inline_coeffs(points);
    r = check_lemma1(d, pts, dc);
  } else {
    if (!points.empty()) throw InvalidArgument("--points applies to lemma 1 only");
    r = check_lemma2(d, dc);
  }
  json report = io::to_json(r);
  report["deformation"] = io::to_json(d);
  report["config"] = config_json(rc);
  if (which == 2) report["config"]["ladder"] = dc.ladder;
  return {io::dump(io::make_report("lemma", std::move(report))) + "\n", r.passed() ? kPass : kCheckFailed};
}

std::vector<double> parse_epsilons(const std::string& list, const std::string& range) {
  if (!list.empty() && !range.empty()) throw InvalidArgument("give --epsilons or --eps-range, not both");
  std::vector<double> eps;
  if (!range.empty()) {
    // lo:hi:count in log10 units
    double lo = 0, hi = 0;
    int count = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(range);
    if (!(is >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || !is.eof() || count < 2 || !(lo < hi)) {
      throw io::ParseError("--eps-range must be LO:HI:COUNT with LO < HI and COUNT >= 2 (log10 units)");
    }
    for (int k = 0; k < count; ++k) eps.push_back(std::pow(10.0, lo + (hi - lo) * k / (count - 1)));
  } else if (!list.empty()) {
    for (Complex c : io::parse_inline_coeffs(list)) {
      if (c.imag() != 0.0) throw io::ParseError("epsilons must be real");
      eps.push_back(c.real());
    }
  } else {
    throw InvalidArgument("continuity needs --epsilons or --eps-range");
  }
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0)) throw InvalidArgument("epsilons must be positive");
    if (i > 0 && !(eps[i] > eps[i - 1])) throw InvalidArgument("epsilons must be increasing");
  }
  return eps;
}

Emitted cmd_continuity(const RunConfig& rc, const std::string& file, const std::string& inline_text,
                       const std::string& eps_list, const std::string& eps_range, std::ostream& err) {
  const CPoly f = load_poly(file, inline_text, rc, "");
  if (f.degree() < 1) throw InvalidArgument("polynomial must have degree at least 1");
  const auto eps = parse_epsilons(eps_list, eps_range);
  ModulusConfig mc;
  mc.sampler.samples = rc.samples;
  mc.sampler.seed = rc.seed;
  mc.sampler.roots = rc.roots();
  const ModulusCurve curve = modulus_curve(f, eps, mc);

  int ok = 0;
  for (const auto& p : curve.points) ok += p.status == "ok";
  int code = ok == 0 ? kNumeric : kPass;

  json soundness = json::array();
  if (rc.verify) {
    for (const auto& p : curve.points) {
      if (p.status != "ok") continue;
      const auto s = soundness_check(f, p, kSoundnessSamples, rc.seed ^ 0x5eedULL, rc.roots());
      soundness.push_back({{"epsilon", p.epsilon},
                           {"samples", s.samples},
                           {"violations", s.violations},
                           {"skipped", s.skipped},
                           {"max_distance", s.max_distance}});
      if (s.violations > 0) code = std::max(code, static_cast<int>(kCheckFailed));
    }
  }

  err << "slope " << (std::isnan(curve.slope) ? std::string("nan") : io::dump(curve.slope)) << " over "
      << ok << " of " << curve.points.size() << " points\n";

  if (rc.format == "csv") return {io::to_csv(curve), code};
  json report = io::to_json(curve);
  report["polynomial"] = io::to_json(f);
  report["config"] = config_json(rc);
  if (rc.verify) report["soundness"] = std::move(soundness);
  return {io::dump(io::make_report("modulus_curve", std::move(report))) + "\n", code};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Root continuity toolkit: roots, alignments, deformation checks and modulus curves",
               "rootflow"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig rc;
  app.add_option("--tolerance", rc.tolerance, "Series and leading-coefficient tolerance");
  app.add_option("--order", rc.order, "Series truncation order K");
  app.add_option("--ladder", rc.ladder, "Decreasing t values, comma separated");
  app.add_option("--seed", rc.seed, "Seed for every random choice");
  app.add_option("--samples", rc.samples, "Random directions per worst-case search");
  app.add_option("--format", rc.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--verify", rc.verify, "Enable oracle cross-checks");
  app.add_option("--out", rc.out, "Write the report to FILE instead of stdout");

  std::string roots_file, roots_inline;
  auto* roots = app.add_subcommand("roots", "Find all roots of a polynomial");
  roots->add_option("file", roots_file, "Polynomial JSON file");
  roots->add_option("--inline", roots_inline, "Coefficients a0,a1,... (complex as re+imi)");

  std::vector<std::string> align_files;
  std::string f_inline, g_inline;
  auto* align = app.add_subcommand("align", "Align the roots of f and g");
  align->add_option("files", align_files, "Polynomial JSON files for f and g");
  align->add_option("--f-inline", f_inline, "Coefficients of f");
  align->add_option("--g-inline", g_inline, "Coefficients of g");

  std::string lemma_file, lemma_points;
  int which = 2;
  auto* lemma = app.add_subcommand("lemma", "Check a deformation against lemma 1 or 2");
  lemma->add_option("file", lemma_file, "Deformation JSON file")->required();
  lemma->add_option("--which", which, "1 or 2")->check(CLI::IsMember({1, 2}));
  lemma->add_option("--points", lemma_points, "Lemma 1 sample points, comma separated");

  std::string cont_file, cont_inline, eps_list, eps_range;
  auto* cont = app.add_subcommand("continuity", "Estimate the modulus of continuity of the roots");
  cont->add_option("file", cont_file, "Polynomial JSON file");
  cont->add_option("--inline", cont_inline, "Coefficients a0,a1,...");
  cont->add_option("--epsilons", eps_list, "Increasing root tolerances, comma separated");
  cont->add_option("--eps-range", eps_range, "LO:HI:COUNT, log10-spaced");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    rc.validate();
    Emitted result;
    if (*roots) {
      result = cmd_roots(rc, roots_file, roots_inline);
    } else if (*align) {
      result = cmd_align(rc, align_files, f_inline, g_inline);
    } else if (*lemma) {
      result = cmd_lemma(rc, lemma_file, which, lemma_points);
    } else {
      result = cmd_continuity(rc, cont_file, cont_inline, eps_list, eps_range, err);
    }
    if (rc.out.empty()) {
      out << result.text;
    } else {
      std::ofstream file(rc.out, std::ios::binary);
      if (!(file << result.text)) {
        err << "error: cannot write \"" << rc.out << "\"\n";
        return kUsage;
      }
    }
    return result.code;
  } catch (const io::ParseError& e) {
    err << "error: " << e.what();
    if (e.offset() != std::string::npos) err << " (at offset " << e.offset() << ")";
    err << "\n";
    return kUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NonConvergence& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const Error& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  }
}

}  // namespace rootflow::cli
