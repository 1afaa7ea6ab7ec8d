#include "ergolab/json_io.hpp"

#include <set>

namespace ergolab::io {

namespace {

void reject_unknown_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key)) throw JsonError(where + ": unknown field '" + key + "'");
  }
}

const Json& require(const Json& j, const std::string& key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw JsonError(where + ": missing field '" + key + "'");
  return *it;
}

}  // namespace

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw JsonError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

Rational rational_from_json(const Json& j, const std::string& where) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
  } catch (const std::invalid_argument& e) {
    throw JsonError(where + ": " + e.what());
  }
  throw JsonError(where + ": expected a rational as \"p/q\" string or integer");
}

Json rational_to_json(const Rational& r) { return Json(format_rational(r)); }

StepFunction step_from_json(const Json& j) {
  if (!j.is_object()) throw JsonError("step function: expected an object");
  reject_unknown_keys(j, {"pieces", "tail"}, "step function");
  const Json& pieces = require(j, "pieces", "step function");
  if (!pieces.is_array()) throw JsonError("step function: 'pieces' must be an array");
  std::vector<std::tuple<Rational, Rational, Rational>> parsed;
  parsed.reserve(pieces.size());
  std::size_t idx = 0;
  for (const auto& piece : pieces) {
    const std::string where = "step function piece " + std::to_string(idx++);
    if (!piece.is_array() || piece.size() != 3) throw JsonError(where + ": expected [a, b, v]");
    parsed.emplace_back(rational_from_json(piece[0], where), rational_from_json(piece[1], where),
                        rational_from_json(piece[2], where));
  }
  const Rational tail = rational_from_json(require(j, "tail", "step function"), "step function tail");
  try {
    return StepFunction::from_pieces(parsed, tail);
  } catch (const std::invalid_argument& e) {
    throw JsonError(std::string("step function: ") + e.what());
  }
}

Json step_to_json(const StepFunction& f) {
  Json pieces = Json::array();
  Rational prev(0);
  for (std::size_t i = 0; i < f.piece_count(); ++i) {
    pieces.push_back(Json::array(
        {rational_to_json(prev), rational_to_json(f.breakpoints()[i]), rational_to_json(f.values()[i])}));
    prev = f.breakpoints()[i];
  }
  Json out;
  out["pieces"] = std::move(pieces);
  out["tail"] = rational_to_json(f.tail_value());
  return out;
}

DiscreteVector discrete_from_json(const Json& j) {
  if (!j.is_object()) throw JsonError("discrete vector: expected an object");
  reject_unknown_keys(j, {"weight", "entries", "tail"}, "discrete vector");
  Rational weight(1);
  if (j.contains("weight")) weight = rational_from_json(j["weight"], "discrete vector weight");
  const Json& entries = require(j, "entries", "discrete vector");
  if (!entries.is_array()) throw JsonError("discrete vector: 'entries' must be an array");
  std::vector<Rational> parsed;
  parsed.reserve(entries.size());
  std::size_t idx = 0;
  for (const auto& e : entries)
    parsed.push_back(rational_from_json(e, "discrete vector entry " + std::to_string(idx++)));
  Rational tail(0);
  if (j.contains("tail")) tail = rational_from_json(j["tail"], "discrete vector tail");
  try {
    return DiscreteVector(std::move(weight), std::move(parsed), std::move(tail));
  } catch (const std::invalid_argument& e) {
    throw JsonError(std::string("discrete vector: ") + e.what());
  }
}

Json discrete_to_json(const DiscreteVector& v) {
  Json entries = Json::array();
  for (const auto& e : v.entries()) entries.push_back(rational_to_json(e));
  Json out;
  out["weight"] = rational_to_json(v.weight());
  out["entries"] = std::move(entries);
  out["tail"] = rational_to_json(v.tail_value());
  return out;
}

bool looks_like_step(const Json& j) { return j.is_object() && j.contains("pieces"); }

namespace {

spaces::OrliczFunction orlicz_from_json(const Json& j) {
  if (!j.is_object()) throw JsonError("Orlicz function: expected an object");
  const std::string family = require(j, "family", "Orlicz function").get<std::string>();
  try {
    if (family == "power") {
      reject_unknown_keys(j, {"family", "p"}, "Orlicz power");
      return spaces::OrliczFunction::power(rational_from_json(require(j, "p", "Orlicz power"), "p"));
    }
    if (family == "shifted_power") {
      reject_unknown_keys(j, {"family", "u0", "p"}, "Orlicz shifted power");
      return spaces::OrliczFunction::shifted_power(
          rational_from_json(require(j, "u0", "Orlicz shifted power"), "u0"),
          rational_from_json(require(j, "p", "Orlicz shifted power"), "p"));
    }
    if (family == "piecewise_power") {
      reject_unknown_keys(j, {"family", "p0", "pinf", "breakpoint"}, "Orlicz piecewise power");
      return spaces::OrliczFunction::piecewise_power(
          rational_from_json(require(j, "p0", "Orlicz piecewise power"), "p0"),
          rational_from_json(require(j, "pinf", "Orlicz piecewise power"), "pinf"),
          rational_from_json(require(j, "breakpoint", "Orlicz piecewise power"), "breakpoint"));
    }
  } catch (const std::invalid_argument& e) {
    throw JsonError(std::string("Orlicz function: ") + e.what());
  }
  throw JsonError("Orlicz function: unknown family '" + family + "'");
}

Json orlicz_to_json(const spaces::OrliczFunction& phi) {
  Json out;
  switch (phi.family()) {
    case spaces::OrliczFunction::Family::power:
      out["family"] = "power";
      out["p"] = rational_to_json(phi.param_p());
      break;
    case spaces::OrliczFunction::Family::shifted_power:
      out["family"] = "shifted_power";
      out["u0"] = rational_to_json(phi.param_u0());
      out["p"] = rational_to_json(phi.param_p());
      break;
    case spaces::OrliczFunction::Family::piecewise_power:
      out["family"] = "piecewise_power";
      out["p0"] = rational_to_json(phi.param_p0());
      out["pinf"] = rational_to_json(phi.param_pinf());
      out["breakpoint"] = rational_to_json(phi.param_breakpoint());
      break;
  }
  return out;
}

spaces::ConcavePhi phi_from_json(const Json& j) {
  if (!j.is_object()) throw JsonError("concave phi: expected an object");
  const std::string family = require(j, "family", "concave phi").get<std::string>();
  try {
    if (family == "power") {
      reject_unknown_keys(j, {"family", "gamma"}, "concave power");
      return spaces::ConcavePhi::power(rational_from_json(require(j, "gamma", "concave power"), "gamma"));
    }
    if (family == "log") {
      reject_unknown_keys(j, {"family"}, "concave log");
      return spaces::ConcavePhi::log1p();
    }
    if (family == "bounded") {
      reject_unknown_keys(j, {"family", "c"}, "concave bounded");
      return spaces::ConcavePhi::bounded(rational_from_json(require(j, "c", "concave bounded"), "c"));
    }
    if (family == "affine") {
      reject_unknown_keys(j, {"family", "a", "b"}, "concave affine");
      return spaces::ConcavePhi::affine(rational_from_json(require(j, "a", "concave affine"), "a"),
                                        rational_from_json(require(j, "b", "concave affine"), "b"));
    }
  } catch (const std::invalid_argument& e) {
    throw JsonError(std::string("concave phi: ") + e.what());
  }
  throw JsonError("concave phi: unknown family '" + family + "'");
}

Json phi_to_json(const spaces::ConcavePhi& phi) {
  Json out;
  switch (phi.family()) {
    case spaces::ConcavePhi::Family::power:
      out["family"] = "power";
      out["gamma"] = rational_to_json(phi.param_gamma());
      break;
    case spaces::ConcavePhi::Family::log1p:
      out["family"] = "log";
      break;
    case spaces::ConcavePhi::Family::bounded:
      out["family"] = "bounded";
      out["c"] = rational_to_json(phi.param_c());
      break;
    case spaces::ConcavePhi::Family::affine:
      out["family"] = "affine";
      out["a"] = rational_to_json(phi.param_a());
      out["b"] = rational_to_json(phi.param_b());
      break;
  }
  return out;
}

}  // namespace

spaces::SpaceSpec space_from_json(const Json& j) {
  if (!j.is_object()) throw JsonError("space: expected an object");
  const std::string tag = require(j, "space", "space").get<std::string>();
  try {
    if (tag == "lp") {
      reject_unknown_keys(j, {"space", "p"}, "space lp");
      const Json& p = require(j, "p", "space lp");
      if (p.is_string() && (p.get<std::string>() == "inf" || p.get<std::string>() == "infinity"))
        return spaces::SpaceSpec::lp_infinity();
      return spaces::SpaceSpec::lp(rational_from_json(p, "space lp exponent"));
    }
    if (tag == "l1plusLinf") {
      reject_unknown_keys(j, {"space"}, "space l1plusLinf");
      return spaces::SpaceSpec::l1_plus_linf();
    }
    if (tag == "l1capLinf") {
      reject_unknown_keys(j, {"space"}, "space l1capLinf");
      return spaces::SpaceSpec::l1_cap_linf();
    }
    if (tag == "orlicz") {
      reject_unknown_keys(j, {"space", "Phi"}, "space orlicz");
      return spaces::SpaceSpec::orlicz(orlicz_from_json(require(j, "Phi", "space orlicz")));
    }
    if (tag == "lorentz") {
      reject_unknown_keys(j, {"space", "phi"}, "space lorentz");
      return spaces::SpaceSpec::lorentz(phi_from_json(require(j, "phi", "space lorentz")));
    }
    if (tag == "marcinkiewicz") {
      reject_unknown_keys(j, {"space", "phi"}, "space marcinkiewicz");
      return spaces::SpaceSpec::marcinkiewicz(phi_from_json(require(j, "phi", "space marcinkiewicz")));
    }
  } catch (const std::invalid_argument& e) {
    throw JsonError(std::string("space: ") + e.what());
  }
  throw JsonError("space: unknown tag '" + tag + "'");
}

Json space_to_json(const spaces::SpaceSpec& s) {
  Json out;
  switch (s.tag()) {
    case spaces::SpaceSpec::Tag::lp:
      out["space"] = "lp";
      out["p"] = s.lp_is_infinity() ? Json("inf") : rational_to_json(s.lp_exponent());
      break;
    case spaces::SpaceSpec::Tag::l1_plus_linf:
      out["space"] = "l1plusLinf";
      break;
    case spaces::SpaceSpec::Tag::l1_cap_linf:
      out["space"] = "l1capLinf";
      break;
    case spaces::SpaceSpec::Tag::orlicz:
      out["space"] = "orlicz";
      out["Phi"] = orlicz_to_json(s.orlicz_function());
      break;
    case spaces::SpaceSpec::Tag::lorentz:
      out["space"] = "lorentz";
      out["phi"] = phi_to_json(s.concave_phi());
      break;
    case spaces::SpaceSpec::Tag::marcinkiewicz:
      out["space"] = "marcinkiewicz";
      out["phi"] = phi_to_json(s.concave_phi());
      break;
  }
  return out;
}

ops::DSOperator operator_from_json(const Json& j) {
  if (!j.is_object()) throw JsonError("operator: expected an object");
  const std::string kind = require(j, "op", "operator").get<std::string>();
  try {
    if (kind == "shift") {
      reject_unknown_keys(j, {"op", "h"}, "operator shift");
      const Rational h = rational_from_json(require(j, "h", "operator shift"), "shift step");
      if (h <= 0) throw JsonError("operator shift: step must be positive");
      return ops::TranslationShift{h};
    }
    if (kind == "seqshift") {
      reject_unknown_keys(j, {"op"}, "operator seqshift");
      return ops::SequenceShift{};
    }
    if (kind == "kernel") {
      reject_unknown_keys(j, {"op", "matrix", "weights"}, "operator kernel");
      const Json& matrix = require(j, "matrix", "operator kernel");
      if (!matrix.is_array()) throw JsonError("operator kernel: 'matrix' must be an array of rows");
      std::vector<std::vector<Rational>> rows;
      rows.reserve(matrix.size());
      std::size_t ri = 0;
      for (const auto& row : matrix) {
        if (!row.is_array()) throw JsonError("operator kernel: row " + std::to_string(ri) + " must be an array");
        std::vector<Rational> r;
        r.reserve(row.size());
        std::size_t ci = 0;
        for (const auto& e : row)
          r.push_back(rational_from_json(
              e, "kernel entry (" + std::to_string(ri) + ", " + std::to_string(ci++) + ")"));
        rows.push_back(std::move(r));
        ++ri;
      }
      std::vector<Rational> weights;
      if (j.contains("weights")) {
        std::size_t wi = 0;
        for (const auto& e : j["weights"])
          weights.push_back(rational_from_json(e, "kernel weight " + std::to_string(wi++)));
      } else {
        weights.assign(rows.size(), Rational(1));
      }
      return ops::KernelOperator(std::move(rows), std::move(weights));
    }
    if (kind == "composition") {
      reject_unknown_keys(j, {"op", "map", "weights"}, "operator composition");
      const Json& map = require(j, "map", "operator composition");
      if (!map.is_array()) throw JsonError("operator composition: 'map' must be an array of 0-based indices");
      std::vector<std::size_t> sigma;
      sigma.reserve(map.size());
      for (const auto& e : map) {
        if (!e.is_number_unsigned() && !(e.is_number_integer() && e.get<std::int64_t>() >= 0))
          throw JsonError("operator composition: map entries must be nonnegative integers");
        sigma.push_back(e.get<std::size_t>());
      }
      std::vector<Rational> weights;
      if (j.contains("weights")) {
        std::size_t wi = 0;
        for (const auto& e : j["weights"])
          weights.push_back(rational_from_json(e, "composition weight " + std::to_string(wi++)));
      } else {
        weights.assign(sigma.size(), Rational(1));
      }
      return ops::CompositionOperator{std::move(sigma), std::move(weights)};
    }
  } catch (const std::invalid_argument& e) {
    throw JsonError(std::string("operator: ") + e.what());
  }
  throw JsonError("operator: unknown kind '" + kind + "'");
}

Json operator_to_json(const ops::DSOperator& op) {
  Json out;
  if (const auto* shift = std::get_if<ops::TranslationShift>(&op)) {
    out["op"] = "shift";
    out["h"] = rational_to_json(shift->h);
    return out;
  }
  if (std::holds_alternative<ops::SequenceShift>(op)) {
    out["op"] = "seqshift";
    return out;
  }
  if (const auto* kernel = std::get_if<ops::KernelOperator>(&op)) {
    out["op"] = "kernel";
    Json matrix = Json::array();
    for (const auto& row : kernel->matrix()) {
      Json r = Json::array();
      for (const auto& e : row) r.push_back(rational_to_json(e));
      matrix.push_back(std::move(r));
    }
    out["matrix"] = std::move(matrix);
    Json weights = Json::array();
    for (const auto& w : kernel->weights()) weights.push_back(rational_to_json(w));
    out["weights"] = std::move(weights);
    return out;
  }
  const auto& comp = std::get<ops::CompositionOperator>(op);
  out["op"] = "composition";
  out["map"] = comp.map;
  Json weights = Json::array();
  for (const auto& w : comp.weights) weights.push_back(rational_to_json(w));
  out["weights"] = std::move(weights);
  return out;
}

Json certificate_to_json(const experiments::Certificate& cert) {
  Json out;
  out["experiment"] = cert.experiment;
  out["verdict"] = cert.verdict;
  out["seed"] = cert.seed;
  out["tolerance"] = format_double(cert.tolerance);
  out["inputs_digest"] = cert.inputs_digest;
  Json params = Json::object();
  for (const auto& [k, v] : cert.params) params[k] = v;
  out["params"] = std::move(params);
  Json measurements = Json::array();
  for (const auto& m : cert.measurements) {
    Json jm;
    jm["name"] = m.name;
    jm["value"] = m.value;
    if (!m.bound.empty()) jm["bound"] = m.bound;
    jm["ok"] = m.ok;
    measurements.push_back(std::move(jm));
  }
  out["measurements"] = std::move(measurements);
  return out;
}

Json egorov_report_to_json(const experiments::EgorovReport& report) {
  Json out;
  out["experiment"] = "egorov";
  out["eps"] = rational_to_json(report.eps);
  out["converged"] = report.converged;
  out["proxy_limit"] = report.proxy_limit;
  out["excluded_measure"] = rational_to_json(report.excluded_measure);
  Json stages = Json::array();
  for (const auto& st : report.stages) {
    Json js;
    js["stage"] = st.stage;
    js["delta"] = format_double(st.delta);
    js["budget"] = rational_to_json(st.budget);
    js["n0"] = st.n0;
    js["excluded"] = rational_to_json(st.excluded);
    stages.push_back(std::move(js));
  }
  out["stages"] = std::move(stages);
  Json sups = Json::array();
  for (const auto& [n, sup] : report.sup_deviation_by_n) {
    Json js;
    js["n"] = n;
    js["sup"] = format_double(sup);
    sups.push_back(std::move(js));
  }
  out["sup_deviation_by_n"] = std::move(sups);
  Json intervals = Json::array();
  for (const auto& [a, b] : report.exceptional_intervals)
    intervals.push_back(Json::array({rational_to_json(a), rational_to_json(b)}));
  out["exceptional_intervals"] = std::move(intervals);
  out["verdict"] = report.converged ? (report.pass ? "pass" : "fail") : "unconverged";
  return out;
}

Json ds_certificate_to_json(const ops::DsCertificate& cert, const std::string& kind) {
  Json out;
  out["experiment"] = "ds-check";
  out["operator"] = kind;
  out["verdict"] = cert.passed ? "pass" : "fail";
  out["analytic"] = cert.analytic;
  out["l1_margin"] = rational_to_json(cert.l1_margin);
  out["linf_margin"] = rational_to_json(cert.linf_margin);
  if (!cert.witness.empty()) out["witness"] = cert.witness;
  return out;
}

std::string decay_table_csv(const experiments::DecayTable& table) {
  std::string out = "n,d_n\n";
  for (const auto& row : table.rows) {
    out += std::to_string(row.n);
    out += ',';
    out += row.d.exact ? format_rational(*row.d.exact) : format_double(row.d.value);
    out += '\n';
  }
  return out;
}

}  // namespace ergolab::io
