#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "rootflow/align.hpp"
#include "rootflow/continuity.hpp"
#include "rootflow/deform.hpp"
#include "rootflow/hyper_scalar.hpp"
#include "rootflow/poly.hpp"
#include "rootflow/roots.hpp"

namespace rootflow::io {

using json = nlohmann::json;

inline constexpr std::string_view kSchema = "rootflow/1";

/// Malformed text or JSON input. `offset` is a character position in the
/// inline syntax, or npos for JSON documents.
class ParseError : public InvalidArgument {
 public:
  ParseError(const std::string& what, std::size_t offset = std::string::npos)
      : InvalidArgument(what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// "a0,a1,…" with entries like 3, -1.5e-3, 2i, -i, 1-2.5i.
std::vector<Complex> parse_inline_coeffs(std::string_view text);
Complex parse_complex(std::string_view text);

json to_json(Complex z);
Complex complex_from_json(const json& j);

/// {"terms": [[num, den, re, im], …], "order": [num, den]}
json to_json(const HyperScalar& x);
HyperScalar hyper_from_json(const json& j, const SeriesConfig& defaults = {});

/// {"coeffs": [[re, im], …]} in ascending order.
json to_json(const CPoly& p);
CPoly poly_from_json(const json& j, double tolerance = kDefaultTolerance);

/// {"base": Poly, "paths": [HyperScalar…], "kind": "linear|polynomial|series"}.
/// A linear deformation may give "directions": [[re, im]…] instead of paths.
json to_json(const Deformation& d);
Deformation deformation_from_json(const json& j, const SeriesConfig& defaults = {});

json to_json(const RootSet& rs);
RootSet rootset_from_json(const json& j);

json to_json(const Alignment& a);
Alignment alignment_from_json(const json& j);

json to_json(const LemmaReport& r);
LemmaReport lemma_report_from_json(const json& j);

json to_json(const ModulusPoint& p);
ModulusPoint modulus_point_from_json(const json& j);
json to_json(const ModulusCurve& c);
ModulusCurve modulus_curve_from_json(const json& j);

/// CSV columns: epsilon,delta,distance_at_delta,witness_json,samples,seed
std::string to_csv(const ModulusCurve& c);

/// Wraps a payload into a top-level report {"schema": "rootflow/1", "kind": …}.
json make_report(std::string_view kind, json payload);

/// Parses a top-level report back into its domain type(s) according to its
/// "kind"; throws ParseError describing the first violation.
void validate_report(const json& report);

/// Deterministic serialization used for every emitted document.
std::string dump(const json& j);

}  // namespace rootflow::io
