#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fisherwit/json_io.hpp"

namespace fisherwit::cli {

struct CurveRow {
  double theta = 0.0;
  double p0 = 0.0;  // probability of the first outcome
  FisherValue fisher;
};

/// (θ, P(0|θ), F_C(θ)) along a grid; out-of-domain points are skipped with
/// a warning on `warn` when given.
std::vector<CurveRow> emit_curve(const EstimationTask& task, const DensityMatrix& rho, const std::vector<double>& grid,
                                 std::ostream* warn = nullptr);

io::json curve_to_json(const std::vector<CurveRow>& rows);
std::string curve_to_tsv(const std::vector<CurveRow>& rows);

/// Names accepted by `reproduce`.
std::vector<std::string> reproduce_targets();

/// Report of a built-in reproduction; `tolerance` decides the "matches" flags.
io::json reproduce(const std::string& name, double tolerance = 1e-9);

/// Runs the command line (args exclude the program name). Returns the exit
/// status: 0 success, 2 invalid input, 3 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fisherwit::cli
