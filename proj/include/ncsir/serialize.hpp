#pragma once

#include <json.hpp>

#include "ncsir/analysis.hpp"
#include "ncsir/equilibria.hpp"
#include "ncsir/integrate.hpp"
#include "ncsir/model.hpp"
#include "ncsir/scenario.hpp"

namespace ncsir {

using Json = nlohmann::ordered_json;

/// Flat object with the ten rate/noise fields plus "variant".
Json to_json(const ModelParams& p);

/// Accepts the flat object; "variant" is optional (default "reduced").
/// Unknown or missing fields raise std::invalid_argument.
ModelParams params_from_json(const Json& j);

Json to_json(const State& x);
State state_from_json(const Json& j);

Json to_json(const IntegrationConfig& cfg);

Json to_json(const Scenario& s);

/// Either a flat ModelParams object (the published fig1 integration setup is
/// used around it) or {"name", "params", "x0", "dt", "t_max", "record_stride",
/// "positivity_policy", "notes"} with everything but "params" optional.
Scenario scenario_from_json(const Json& j);

Json to_json(const DiseaseFreePoint& x);
Json to_json(const StabilityReport& r);
Json to_json(const ThresholdCheck& t);
Json to_json(const smalllin::Mat2& m);
Json to_json(const LyapunovCertificate& c);
Json to_json(const EnsembleSummary& s);
Json to_json(const DecayFit& f);

}  // namespace ncsir
