#include "ncsir/serialize.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace ncsir {

namespace {

constexpr const char* kParamFields[] = {"b",  "delta", "beta", "gamma",      "alpha",
                                        "mu", "nu",    "xi",   "sigma_beta", "sigma_mu"};

double number_field(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw std::invalid_argument(std::string("missing field '") + key + "'");
  if (!it->is_number()) throw std::invalid_argument(std::string("field '") + key + "' must be a number");
  return it->get<double>();
}

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const char* what) {
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw std::invalid_argument(std::string("unknown field '") + key + "' in " + what);
}

PositivityPolicy policy_from_string(const std::string& s) {
  if (s == "monitor") return PositivityPolicy::Monitor;
  if (s == "clamp") return PositivityPolicy::ClampToZero;
  throw std::invalid_argument("positivity_policy must be monitor|clamp, got '" + s + "'");
}

const char* to_string(PositivityPolicy p) { return p == PositivityPolicy::ClampToZero ? "clamp" : "monitor"; }

}  // namespace

Json to_json(const ModelParams& p) {
  const ParamValues& v = p.values();
  return Json{{"b", v.b},
              {"delta", v.delta},
              {"beta", v.beta},
              {"gamma", v.gamma},
              {"alpha", v.alpha},
              {"mu", v.mu},
              {"nu", v.nu},
              {"xi", v.xi},
              {"sigma_beta", v.sigma_beta},
              {"sigma_mu", v.sigma_mu},
              {"variant", std::string(to_string(v.variant))}};
}

ModelParams params_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("model parameters must be a JSON object");
  std::set<std::string> allowed(std::begin(kParamFields), std::end(kParamFields));
  allowed.insert("variant");
  reject_unknown(j, allowed, "model parameters");
  ParamValues v;
  v.b = number_field(j, "b");
  v.delta = number_field(j, "delta");
  v.beta = number_field(j, "beta");
  v.gamma = number_field(j, "gamma");
  v.alpha = number_field(j, "alpha");
  v.mu = number_field(j, "mu");
  v.nu = number_field(j, "nu");
  v.xi = number_field(j, "xi");
  v.sigma_beta = number_field(j, "sigma_beta");
  v.sigma_mu = number_field(j, "sigma_mu");
  if (const auto it = j.find("variant"); it != j.end()) {
    if (!it->is_string()) throw std::invalid_argument("field 'variant' must be a string");
    v.variant = noise_variant_from_string(it->get<std::string>());
  }
  return ModelParams(v);
}

Json to_json(const State& x) {
  return Json{{"S", x.S}, {"I", x.I}, {"R", x.R}, {"S_star", x.S_star}, {"I_star", x.I_star}, {"R_star", x.R_star}};
}

State state_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("state must be a JSON object");
  reject_unknown(j, {"S", "I", "R", "S_star", "I_star", "R_star"}, "state");
  return {number_field(j, "S"),      number_field(j, "I"),      number_field(j, "R"),
          number_field(j, "S_star"), number_field(j, "I_star"), number_field(j, "R_star")};
}

Json to_json(const IntegrationConfig& cfg) {
  return Json{{"dt", cfg.dt},
              {"t_max", cfg.t_max},
              {"record_stride", cfg.record_stride},
              {"positivity_policy", to_string(cfg.positivity_policy)},
              {"scheme", cfg.scheme == Scheme::Milstein ? "milstein" : "euler_maruyama"}};
}

Json to_json(const Scenario& s) {
  return Json{{"name", s.name},
              {"params", to_json(s.params)},
              {"x0", to_json(s.x0)},
              {"integration", to_json(s.cfg)},
              {"notes", s.notes}};
}

Scenario scenario_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("scenario must be a JSON object");
  if (!j.contains("params")) {
    Scenario s = preset("fig1");
    s.name = "custom";
    s.params = params_from_json(j);
    s.notes = "custom parameters; published initial state and integration grid";
    return s;
  }
  reject_unknown(j, {"name", "params", "x0", "dt", "t_max", "record_stride", "positivity_policy", "notes"},
                 "scenario");
  Scenario s = preset("fig1");
  s.name = j.value("name", std::string("custom"));
  s.params = params_from_json(j.at("params"));
  if (j.contains("x0")) s.x0 = state_from_json(j.at("x0"));
  if (j.contains("dt")) s.cfg.dt = number_field(j, "dt");
  if (j.contains("t_max")) s.cfg.t_max = number_field(j, "t_max");
  if (j.contains("record_stride")) {
    const auto& r = j.at("record_stride");
    if (!r.is_number_integer() || r.get<long long>() < 1)
      throw std::invalid_argument("record_stride must be a positive integer");
    s.cfg.record_stride = r.get<std::size_t>();
  }
  if (j.contains("positivity_policy")) s.cfg.positivity_policy = policy_from_string(j.at("positivity_policy").get<std::string>());
  s.notes = j.value("notes", std::string());
  s.cfg.step_count();
  return s;
}

Json to_json(const DiseaseFreePoint& x) {
  return Json{{"s", x.s}, {"s_star", x.s_star}, {"kind", std::string(to_string(x.kind))}, {"admissible", x.admissible}};
}

Json to_json(const StabilityReport& r) {
  Json j;
  j["dfe"] = to_json(r.dfe);
  j["r0"] = r.r0 ? Json(*r.r0) : Json(nullptr);
  j["r0_sigma"] = r.r0_sigma ? Json(*r.r0_sigma) : Json(nullptr);
  j["eigenvalues_dv"] = r.eigenvalues_dv;
  j["condition_a5"] = r.condition_a5;
  j["deterministic_verdict"] = std::string(to_string(r.deterministic_verdict));
  j["stochastic_verdict"] = std::string(to_string(r.stochastic_verdict));
  j["inputs_echo"] = to_json(ModelParams(r.inputs_echo));
  return j;
}

Json to_json(const ThresholdCheck& t) {
  return Json{{"lhs", t.lhs}, {"rhs", t.rhs}, {"satisfied", t.satisfied}};
}

Json to_json(const smalllin::Mat2& m) {
  return Json::array({Json::array({m.a11, m.a12}), Json::array({m.a21, m.a22})});
}

Json to_json(const LyapunovCertificate& c) {
  return Json{{"M", to_json(c.M)}, {"Q", to_json(c.Q)}, {"normQ", c.normQ},
              {"C", c.C},          {"bound", c.bound},  {"dfe", to_json(c.dfe)}};
}

Json to_json(const EnsembleSummary& s) {
  return Json{{"n_paths", s.n_paths},
              {"times", s.times},
              {"ms_distance", s.ms_distance},
              {"ms_I", s.ms_I},
              {"ms_Istar", s.ms_Istar},
              {"std_error", s.std_error},
              {"min_component_seen", s.min_component_seen},
              {"clamped_mass_max", s.clamped_mass_max},
              {"population_residual_max", s.population_residual_max}};
}

Json to_json(const DecayFit& f) {
  return Json{{"rate", f.rate},
              {"intercept", f.intercept},
              {"r_squared", f.r_squared},
              {"window", Json::array({f.window_start, f.window_end})}};
}

}  // namespace ncsir
