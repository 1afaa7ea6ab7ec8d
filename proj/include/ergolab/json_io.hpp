#pragma once

#include <json.hpp>

#include <string>

#include "ergolab/experiments.hpp"
#include "ergolab/operators.hpp"
#include "ergolab/rational.hpp"
#include "ergolab/spaces.hpp"
#include "ergolab/step_function.hpp"

namespace ergolab::io {

using Json = nlohmann::ordered_json;

/// Thrown on malformed or out-of-schema input; the message names the
/// offending location.
struct JsonError : std::runtime_error {
  explicit JsonError(const std::string& what) : std::runtime_error(what) {}
};

Json parse(const std::string& text);  // wraps parse errors into JsonError

// Rationals travel as canonical "p/q" strings; plain JSON integers are
// accepted on input.
Rational rational_from_json(const Json& j, const std::string& where);
Json rational_to_json(const Rational& r);

// {"pieces": [[a, b, v], ...], "tail": v}
StepFunction step_from_json(const Json& j);
Json step_to_json(const StepFunction& f);

// {"weight": w, "entries": [...], "tail": v}
DiscreteVector discrete_from_json(const Json& j);
Json discrete_to_json(const DiscreteVector& v);

// dispatch on the "pieces" / "entries" key
bool looks_like_step(const Json& j);

// {"space": "lp", "p": "3/2"} | {"space": "l1plusLinf"} | {"space": "l1capLinf"}
// | {"space": "orlicz", "Phi": {...}} | {"space": "lorentz"|"marcinkiewicz", "phi": {...}}
spaces::SpaceSpec space_from_json(const Json& j);
Json space_to_json(const spaces::SpaceSpec& s);

// {"op": "shift", "h": "1"} | {"op": "seqshift"}
// | {"op": "kernel", "matrix": [...], "weights": [...]}
// | {"op": "composition", "map": [...], "weights": [...]}
ops::DSOperator operator_from_json(const Json& j);
Json operator_to_json(const ops::DSOperator& op);

Json certificate_to_json(const experiments::Certificate& cert);
Json egorov_report_to_json(const experiments::EgorovReport& report);
Json ds_certificate_to_json(const ops::DsCertificate& cert, const std::string& kind);

std::string decay_table_csv(const experiments::DecayTable& table);  // header n,d_n

}  // namespace ergolab::io
