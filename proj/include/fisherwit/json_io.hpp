#pragma once

#include <json.hpp>

#include "fisherwit/criterion.hpp"
#include "fisherwit/opwitness.hpp"
#include "fisherwit/witnesscraft.hpp"

namespace fisherwit::io {

using json = nlohmann::json;

// Non-finite numbers are written as the strings "inf", "-inf" and "nan".
json number(double v);
double to_number(const json& j, const char* what);

/// Complex entries are [re, im]; plain numbers are accepted as real.
json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j, const char* what = "matrix");

/// {"dim": n, "matrix": [[...]]}, or {"ket": [...]}, or {"bloch": [x, y, z]}.
json to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const json& j);

Povm povm_from_json(const json& j);
KrausChannel channel_from_json(const json& j);

/// {"variant": "incoherent"|"polytope"|"blochball"|"singleton"|"hemisphere", ...}
FreeSet free_set_from_json(const json& j);

/// {"type": "unitary", "generator": M} or {"type": "mixture", "at_zero": ch, "at_one": ch}
ChannelFamily family_from_json(const json& j);

OperationGame game_from_json(const json& j);

json to_json(const FisherValue& v);
json to_json(const WitnessReport& r);
json to_json(const RobustnessResult& r);
json to_json(const BinaryBounds& b);
json to_json(const CriterionResult& c, bool include_optimizer = false);
json to_json(const ChannelGap& g);

WitnessReport witness_report_from_json(const json& j);

}  // namespace fisherwit::io
