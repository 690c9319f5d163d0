#include "fisherwit/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

namespace fisherwit::cli {

namespace {

using io::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

double worked_example_closed_form(double theta) {
  const double c = std::cos(theta / 2.0);
  return 2.0 * c * c / (3.0 + std::cos(theta));
}

EstimationTask worked_example_task() {
  ComplexMatrix m0 = ComplexMatrix::Zero(2, 2), m1 = ComplexMatrix::Zero(2, 2);
  m0(0, 0) = 1.0;
  m0(1, 1) = 0.5;
  m1(1, 1) = 0.5;
  return EstimationTask(unitary_family(0.5 * pauli::y()), Povm({m0, m1}), 0.0);
}

json reproduce_worked_example(double tol) {
  const EstimationTask task = worked_example_task();
  const DensityMatrix zero = DensityMatrix::basis_state(2, 0);
  ComplexVector plus(2);
  plus << 1.0, 1.0;
  const FisherValue fc_zero = classical_fisher(task, zero);
  const FisherValue fc_plus = classical_fisher(task, DensityMatrix::pure(plus));
  const WitnessReport rep = n_c(task, zero, hemisphere_free_set());

  const std::vector<double> grid = {0.0, std::numbers::pi / 4.0, std::numbers::pi / 2.0};
  const auto rows = emit_curve(task, zero, grid);
  json curve = curve_to_json(rows);
  double worst = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double expected = worked_example_closed_form(rows[i].theta);
    curve[i]["closed_form"] = expected;
    worst = std::max(worst, std::abs(rows[i].fisher.value - expected));
  }
  const double exact_nc = 0.5 - 1.0 / 3.0;
  return {{"example", "worked-example"},
          {"f_c_zero", io::number(fc_zero.value)},
          {"f_c_plus", io::number(fc_plus.value)},
          {"n_value", io::number(rep.n_value)},
          {"free_max", io::number(rep.free_max)},
          {"free_set", "hemisphere(720)"},
          {"curve", curve},
          {"max_curve_error", worst},
          {"matches", worst <= tol && std::abs(fc_zero.value - 0.5) <= tol &&
                          std::abs(fc_plus.value - 1.0 / 3.0) <= tol && std::abs(rep.n_value - exact_nc) <= 1e-3}};
}

json reproduce_coherence_criterion() {
  const CriterionResult zero = criterion_sdp(pauli::z(), FreeSet::singleton(DensityMatrix::basis_state(2, 0)));
  const CriterionResult one = criterion_sdp(pauli::z(), FreeSet::singleton(DensityMatrix::basis_state(2, 1)));
  json out = io::to_json(zero);
  out["example"] = "coherence-criterion";
  out["singleton_one"] = io::to_json(one);
  return out;
}

json reproduce_bell_tightness(double tol) {
  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const WitnessReport rep = nc_from_witness_entanglement(bell, 2, 2);
  json out = io::to_json(rep);
  out["example"] = "bell-tightness";
  out["matches"] = std::abs(rep.n_value - 3.0) <= std::max(tol, 1e-6);
  return out;
}

OperationGame hadamard_game() {
  ComplexVector plus(2), minus(2);
  plus << 1.0, 1.0;
  minus << 1.0, -1.0;
  ComplexMatrix flip = pauli::x();
  return OperationGame({0.5, 0.5}, {DensityMatrix::pure(plus), DensityMatrix::pure(minus)},
                       {outer(basis_ket(2, 0)), outer(basis_ket(2, 1))},
                       {KrausChannel::identity(2), KrausChannel::dephasing(2), KrausChannel::unitary(flip)});
}

json reproduce_hadamard_game(double tol) {
  const ComplexMatrix h = (pauli::x() + pauli::z()) / std::sqrt(2.0);
  const ChannelGap g = channel_nc_gap(KrausChannel::unitary(h), hadamard_game());
  json out = io::to_json(g);
  out["example"] = "hadamard-game";
  out["matches"] = std::abs(g.gap - 1.0) <= tol;
  return out;
}

json reproduce_bloch_robustness(double tol) {
  const DensityMatrix pure = DensityMatrix::basis_state(2, 0);
  const FreeSet ball = FreeSet::bloch_ball(0.5);
  ComplexVector plus(2);
  plus << 1.0, 1.0;
  const DensityMatrix plus_state = DensityMatrix::pure(plus);
  const FreeSet inc = FreeSet::incoherent(2);
  const RobustnessResult g_ball = generalized_robustness(pure, ball);
  const RobustnessResult s_ball = standard_robustness(pure, ball);
  const RobustnessResult g_inc = generalized_robustness(plus_state, inc);
  const RobustnessResult s_inc = standard_robustness(plus_state, inc);
  return {{"example", "bloch-robustness"},
          {"blochball_generalized", io::to_json(g_ball)},
          {"blochball_standard", io::to_json(s_ball)},
          {"incoherent_generalized", io::to_json(g_inc)},
          {"incoherent_standard", io::to_json(s_inc)},
          {"matches", std::abs(g_ball.value - 1.0 / 3.0) <= tol && std::abs(s_ball.value - 0.5) <= tol &&
                          std::abs(g_inc.value - 1.0) <= std::max(tol, 1e-7) && s_inc.infinite}};
}

std::string to_tsv(const json& j) {
  std::ostringstream os;
  for (const auto& [key, value] : j.items()) {
    os << key << '\t' << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
  }
  return os.str();
}

struct Common {
  std::string input;
  std::string inline_json;
  std::string output;
  std::string format = "json";
  int jobs = 1;
  double tolerance = 1e-9;
};

json load_input(const Common& c) {
  if (!c.inline_json.empty()) return json::parse(c.inline_json);
  if (c.input.empty()) throw Error(ErrorKind::InvalidInput, "no input given; use --input FILE or --json TEXT");
  if (c.input == "-") return json::parse(std::cin);
  std::ifstream f(c.input);
  if (!f) throw Error(ErrorKind::InvalidInput, "cannot open input file " + c.input);
  return json::parse(f);
}

double theta_of(const json& in) { return in.contains("theta") ? io::to_number(in.at("theta"), "theta") : 0.0; }

const json& req(const json& in, const char* key) {
  if (!in.is_object() || !in.contains(key)) throw Error(ErrorKind::InvalidInput, std::string("schema: missing field \"") + key + "\"");
  return in.at(key);
}

// Runs one subcommand; returns the JSON report or, for curves, TSV text.
std::pair<json, std::string> dispatch(const std::string& cmd, const Common& c, const std::string& target,
                                      std::ostream& err) {
  const ScanOptions scan{c.jobs != 1, c.jobs > 1 ? c.jobs : 0};
  if (cmd == "reproduce") {
    json rep = reproduce(target, c.tolerance);
    std::string tsv;
    if (c.format == "tsv" && rep.contains("curve")) {
      std::ostringstream os;
      os << "theta\tp0\tfisher\tclosed_form\n";
      for (const auto& row : rep.at("curve"))
        os << row.at("theta").dump() << '\t' << row.at("p0").dump() << '\t' << row.at("fisher").dump() << '\t'
           << row.at("closed_form").dump() << '\n';
      tsv = os.str();
    }
    return {rep, tsv};
  }

  const json in = load_input(c);
  if (cmd == "cfi") {
    EstimationTask task(io::family_from_json(req(in, "family")), io::povm_from_json(req(in, "povm")), theta_of(in));
    const DensityMatrix rho = io::state_from_json(req(in, "state"));
    if (in.contains("grid")) {
      std::vector<double> grid;
      for (const auto& g : in.at("grid")) grid.push_back(io::to_number(g, "grid"));
      const auto rows = emit_curve(task, rho, grid, &err);
      return {curve_to_json(rows), c.format == "tsv" ? curve_to_tsv(rows) : std::string()};
    }
    return {io::to_json(classical_fisher(task, rho)), {}};
  }
  if (cmd == "qfi") {
    const ChannelFamily fam = io::family_from_json(req(in, "family"));
    return {io::to_json(quantum_fisher(fam, io::state_from_json(req(in, "state")), theta_of(in))), {}};
  }
  if (cmd == "nc") {
    EstimationTask task(io::family_from_json(req(in, "family")), io::povm_from_json(req(in, "povm")), theta_of(in));
    return {io::to_json(n_c(task, io::state_from_json(req(in, "state")), io::free_set_from_json(req(in, "free_set")),
                            scan)),
            {}};
  }
  if (cmd == "nq") {
    return {io::to_json(n_q(io::family_from_json(req(in, "family")), io::state_from_json(req(in, "state")),
                            io::free_set_from_json(req(in, "free_set")), theta_of(in), scan)),
            {}};
  }
  if (cmd == "robustness") {
    const DensityMatrix rho = io::state_from_json(req(in, "state"));
    const FreeSet free = io::free_set_from_json(req(in, "free_set"));
    return {{{"generalized", io::to_json(generalized_robustness(rho, free))},
             {"standard", io::to_json(standard_robustness(rho, free))}},
            {}};
  }
  if (cmd == "witness-task") {
    const DensityMatrix rho = io::state_from_json(req(in, "state"));
    const FreeSet free = io::free_set_from_json(req(in, "free_set"));
    json out = io::to_json(nc_from_witness(rho, free, scan));
    const RobustnessResult r = generalized_robustness(rho, free);
    if (!r.infinite) {
      const Witness w = optimal_witness(rho, free);
      const DiscriminationTask dt = build_discrimination_task(w, free);
      out["witness"] = io::to_json(w.op);
      out["offset"] = dt.offset;
      out["scale"] = dt.scale;
      out["free_min"] = dt.free_min;
    }
    return {out, {}};
  }
  if (cmd == "nc-bounds") {
    EstimationTask task(io::family_from_json(req(in, "family")), io::povm_from_json(req(in, "povm")), theta_of(in));
    return {io::to_json(nc_upper_bound_binary(task, io::state_from_json(req(in, "state")),
                                              io::free_set_from_json(req(in, "free_set")), scan)),
            {}};
  }
  if (cmd == "criterion") {
    const ComplexMatrix g = io::matrix_from_json(req(in, "generator"), "generator");
    return {io::to_json(criterion_sdp(g, io::free_set_from_json(req(in, "free_set"))), true), {}};
  }
  if (cmd == "op-witness") {
    const OperationGame game = io::game_from_json(req(in, "game"));
    return {io::to_json(channel_nc_gap(io::channel_from_json(req(in, "target")), game)), {}};
  }
  throw Error(ErrorKind::InvalidInput, "unknown subcommand " + cmd);
}

}  // namespace

std::vector<CurveRow> emit_curve(const EstimationTask& task, const DensityMatrix& rho, const std::vector<double>& grid,
                                 std::ostream* warn) {
  std::vector<CurveRow> rows;
  for (double theta : grid) {
    if (!task.family.domain().contains(theta)) {
      if (warn) *warn << "warning: θ = " << theta << " outside the family domain, row skipped\n";
      continue;
    }
    try {
      const ComplexMatrix out = task.family.output(theta, rho.matrix());
      rows.push_back({theta, std::clamp(real_trace_product(out, task.povm[0]), 0.0, 1.0),
                      classical_fisher_at(task, rho, theta)});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::OutOfDomain) throw;
      if (warn) *warn << "warning: " << e.what() << ", row skipped\n";
    }
  }
  return rows;
}

io::json curve_to_json(const std::vector<CurveRow>& rows) {
  json out = json::array();
  for (const auto& r : rows)
    out.push_back({{"theta", r.theta}, {"p0", r.p0}, {"fisher", io::number(r.fisher.value)}});
  return out;
}

std::string curve_to_tsv(const std::vector<CurveRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "theta\tp0\tfisher\n";
  for (const auto& r : rows) os << r.theta << '\t' << r.p0 << '\t' << io::number(r.fisher.value).dump() << '\n';
  return os.str();
}

std::vector<std::string> reproduce_targets() {
  return {"worked-example", "coherence-criterion", "bell-tightness", "hadamard-game", "bloch-robustness"};
}

io::json reproduce(const std::string& name, double tolerance) {
  if (name == "worked-example") return reproduce_worked_example(tolerance);
  if (name == "coherence-criterion") return reproduce_coherence_criterion();
  if (name == "bell-tightness") return reproduce_bell_tightness(tolerance);
  if (name == "hadamard-game") return reproduce_hadamard_game(tolerance);
  if (name == "bloch-robustness") return reproduce_bloch_robustness(tolerance);
  throw Error(ErrorKind::InvalidInput, "unknown reproduce target \"" + name + "\"");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fisher-information resource witnesses"};
  app.require_subcommand(1);
  Common common;
  std::string target;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"cfi", "classical Fisher information (or a curve with \"grid\")"},
      {"qfi", "quantum Fisher information"},
      {"nc", "CFI advantage over the free set"},
      {"nq", "QFI advantage over the free set"},
      {"robustness", "generalized and standard robustness"},
      {"witness-task", "witness task and its N_C with robustness bounds"},
      {"nc-bounds", "upper bounds for two-outcome tasks"},
      {"criterion", "usefulness test for a unitary generator"},
      {"op-witness", "CFI gap of a channel in a discrimination game"},
      {"reproduce", "built-in examples: " + [] {
         std::string s;
         for (const auto& t : reproduce_targets()) s += (s.empty() ? "" : ", ") + t;
         return s;
       }()}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--input,-i", common.input, "input JSON file ('-' for stdin)");
    sub->add_option("--json", common.inline_json, "inline JSON input");
    sub->add_option("--output,-o", common.output, "write the report here instead of stdout");
    sub->add_option("--format", common.format, "json or tsv")->check(CLI::IsMember({"json", "tsv"}));
    sub->add_option("--jobs,-j", common.jobs, "threads for free-set scans (1 = serial, 0 = all)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--tolerance", common.tolerance, "tolerance for reproduce comparisons")
        ->check(CLI::PositiveNumber);
    if (name == "reproduce") sub->add_option("target", target, "example name")->required();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  try {
    auto [report, tsv] = dispatch(cmd, common, target, err);
    std::string text = common.format == "tsv" ? (tsv.empty() ? to_tsv(report) : tsv) : report.dump(2) + "\n";
    if (common.output.empty()) {
      out << text;
    } else {
      std::ofstream f(common.output);
      if (!f) throw Error(ErrorKind::InvalidInput, "cannot write " + common.output);
      f << text;
    }
    return kExitOk;
  } catch (const json::exception& e) {
    err << "error: InvalidInput: schema: " << e.what() << '\n';
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_validation_error(e.kind()) ? kExitInput : kExitNumeric;
  }
}

}  // namespace fisherwit::cli
