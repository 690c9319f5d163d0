#include "fisherwit/json_io.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace fisherwit::io {

namespace {

[[noreturn]] void schema_error(const std::string& msg) { throw Error(ErrorKind::InvalidInput, "schema: " + msg); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema_error(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Complex complex_from_json(const json& j, const char* what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  schema_error(std::string(what) + ": entries must be numbers or [re, im] pairs");
}

std::vector<ComplexMatrix> matrices_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) schema_error(std::string(what) + " must be a non-empty array of matrices");
  std::vector<ComplexMatrix> out;
  for (const auto& m : j) out.push_back(matrix_from_json(m, what));
  return out;
}

json flags_json(const std::vector<std::string>& flags) { return json(flags); }

}  // namespace

json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v == 0.0 ? 0.0 : v;
}

double to_number(const json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  schema_error(std::string(what) + " must be a number");
}

json to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) schema_error(std::string(what) + " must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) schema_error(std::string(what) + " rows must be non-empty arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  if (rows > kMaxDim || cols > kMaxDim) throw Error(ErrorKind::DimensionLimit, std::string(what) + " too large");
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      schema_error(std::string(what) + " rows have unequal lengths");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)], what);
  }
  return m;
}

json to_json(const DensityMatrix& rho) { return {{"dim", rho.dim()}, {"matrix", to_json(rho.matrix())}}; }

DensityMatrix state_from_json(const json& j) {
  if (!j.is_object()) schema_error("state must be an object");
  if (j.contains("ket")) {
    const json& k = j.at("ket");
    if (!k.is_array() || k.empty()) schema_error("ket must be a non-empty array");
    ComplexVector psi(static_cast<Eigen::Index>(k.size()));
    for (std::size_t i = 0; i < k.size(); ++i) psi(static_cast<Eigen::Index>(i)) = complex_from_json(k[i], "ket");
    return DensityMatrix::pure(psi);
  }
  if (j.contains("bloch")) {
    const json& b = j.at("bloch");
    if (!b.is_array() || b.size() != 3) schema_error("bloch must have three components");
    return DensityMatrix::from_bloch({to_number(b[0], "bloch"), to_number(b[1], "bloch"), to_number(b[2], "bloch")});
  }
  const ComplexMatrix m = matrix_from_json(field(j, "matrix"), "state matrix");
  if (j.contains("dim") && (!j.at("dim").is_number_integer() || j.at("dim").get<long>() != m.rows()))
    schema_error("state dim does not match its matrix");
  return validate_state(m);
}

Povm povm_from_json(const json& j) { return Povm(matrices_from_json(field(j, "elements"), "POVM element")); }

KrausChannel channel_from_json(const json& j) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "identity") return KrausChannel::identity(2);
    if (name == "dephasing") return KrausChannel::dephasing(2);
    schema_error("unknown channel name \"" + name + "\"");
  }
  return KrausChannel(matrices_from_json(field(j, "kraus"), "Kraus operator"));
}

FreeSet free_set_from_json(const json& j) {
  const json& v = field(j, "variant");
  if (!v.is_string()) schema_error("variant must be a string");
  const auto variant = v.get<std::string>();
  if (variant == "incoherent") {
    const json& d = field(j, "dim");
    if (!d.is_number_integer()) schema_error("incoherent dim must be an integer");
    return FreeSet::incoherent(d.get<int>());
  }
  if (variant == "blochball") return FreeSet::bloch_ball(to_number(field(j, "radius"), "radius"));
  if (variant == "singleton") return FreeSet::singleton(state_from_json(field(j, "state")));
  if (variant == "hemisphere") {
    const int points = j.contains("points") ? j.at("points").get<int>() : 720;
    return hemisphere_free_set(points);
  }
  if (variant == "polytope") {
    const json& verts = field(j, "vertices");
    if (!verts.is_array() || verts.empty()) schema_error("polytope vertices must be a non-empty array");
    std::vector<DensityMatrix> states;
    for (const auto& s : verts) states.push_back(state_from_json(s));
    return FreeSet::polytope(std::move(states));
  }
  schema_error("unknown free-set variant \"" + variant + "\"");
}

ChannelFamily family_from_json(const json& j) {
  const json& t = field(j, "type");
  if (!t.is_string()) schema_error("family type must be a string");
  const auto type = t.get<std::string>();
  if (type == "unitary") return unitary_family(matrix_from_json(field(j, "generator"), "generator"));
  if (type == "mixture")
    return mixture_family(channel_from_json(field(j, "at_zero")), channel_from_json(field(j, "at_one")));
  schema_error("unknown family type \"" + type + "\"");
}

OperationGame game_from_json(const json& j) {
  const json& probs = field(j, "probabilities");
  if (!probs.is_array()) schema_error("probabilities must be an array");
  std::vector<double> p;
  for (const auto& x : probs) p.push_back(to_number(x, "probability"));
  std::vector<DensityMatrix> states;
  const json& sj = field(j, "states");
  if (!sj.is_array()) schema_error("states must be an array");
  for (const auto& s : sj) states.push_back(state_from_json(s));
  std::vector<KrausChannel> ops;
  const json& oj = field(j, "free_ops");
  if (!oj.is_array()) schema_error("free_ops must be an array");
  for (const auto& o : oj) ops.push_back(channel_from_json(o));
  const int ancilla = j.contains("ancilla_dim") ? j.at("ancilla_dim").get<int>() : 1;
  return OperationGame(std::move(p), std::move(states), matrices_from_json(field(j, "guesses"), "guess"),
                       std::move(ops), ancilla);
}

json to_json(const FisherValue& v) {
  return {{"value", number(v.value)}, {"infinite", v.infinite}, {"eval_point", number(v.eval_point)}};
}

json to_json(const WitnessReport& r) {
  json out = {{"n_value", number(r.n_value)},
              {"resource_value", number(r.resource_value)},
              {"free_max", number(r.free_max)},
              {"task", r.task_descriptor},
              {"normalized", r.normalized},
              {"flags", flags_json(r.flags)}};
  if (r.bounds) out["bounds"] = {{"lower", number(r.bounds->lower)}, {"upper", number(r.bounds->upper)}};
  if (r.robustness) out["robustness"] = number(*r.robustness);
  return out;
}

WitnessReport witness_report_from_json(const json& j) {
  WitnessReport r;
  r.n_value = to_number(field(j, "n_value"), "n_value");
  r.resource_value = to_number(field(j, "resource_value"), "resource_value");
  r.free_max = to_number(field(j, "free_max"), "free_max");
  r.task_descriptor = field(j, "task").get<std::string>();
  r.normalized = field(j, "normalized").get<bool>();
  r.flags = field(j, "flags").get<std::vector<std::string>>();
  if (j.contains("bounds")) {
    const json& b = j.at("bounds");
    r.bounds = NcBounds{to_number(field(b, "lower"), "lower"), to_number(field(b, "upper"), "upper")};
  }
  if (j.contains("robustness")) r.robustness = to_number(j.at("robustness"), "robustness");
  return r;
}

json to_json(const RobustnessResult& r) {
  json out = {{"value", number(r.value)}, {"infinite", r.infinite}, {"method", r.method}};
  if (r.witness) out["witness"] = {{"operator", to_json(r.witness->op)}, {"free_value", number(r.witness->free_value)}};
  return out;
}

json to_json(const BinaryBounds& b) {
  return {{"n_c", number(b.n_c)},
          {"r", number(b.r)},
          {"omega", number(b.omega)},
          {"standard_robustness", number(b.standard_robustness)},
          {"q_min", number(b.q_min)},
          {"q_max", number(b.q_max)},
          {"max_free_variance", number(b.max_free_variance)},
          {"bound_tight", number(b.bound_tight)},
          {"bound_loose", number(b.bound_loose)},
          {"vacuous", b.vacuous},
          {"flags", flags_json(b.flags)}};
}

json to_json(const CriterionResult& c, bool include_optimizer) {
  json out = {{"s_star", number(c.s_star)},
              {"gap_sq", number(c.gap_sq)},
              {"certified", c.certified},
              {"verdict", c.certified ? "useful" : "inconclusive"}};
  if (include_optimizer) out["optimizer"] = to_json(c.optimizer);
  return out;
}

json to_json(const ChannelGap& g) {
  json out = {{"p_target", number(g.p_target)},
              {"p_reference", number(g.p_reference)},
              {"reference_index", g.reference_index},
              {"cfi_target", number(g.cfi_target)},
              {"cfi_free_max", number(g.cfi_free_max)},
              {"gap", number(g.gap)},
              {"divergent", g.divergent}};
  if (g.explicit_residual >= 0.0) out["explicit_residual"] = number(g.explicit_residual);
  return out;
}

}  // namespace fisherwit::io
