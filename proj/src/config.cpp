#include "pdmpline/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "pdmpline/errors.hpp"

namespace pdmpline {

using nlohmann::json;

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  const std::set<std::string> names(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items())
    if (!names.contains(key)) throw ConfigError("unknown key", join(path, key));
}

const json& require_object(const json& node, const std::string& path) {
  if (!node.is_object()) throw ConfigError("expected an object", path);
  return node;
}

double read_number(const json& node, const std::string& path) {
  if (!node.is_number()) throw ConfigError("expected a number", path);
  return node.get<double>();
}

std::uint64_t read_unsigned(const json& node, const std::string& path) {
  if (node.is_number_unsigned()) return node.get<std::uint64_t>();
  if (node.is_number_integer() && node.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(node.get<std::int64_t>());
  throw ConfigError("expected a non-negative integer", path);
}

std::vector<double> read_numbers(const json& node, const std::string& path) {
  if (!node.is_array()) throw ConfigError("expected an array of numbers", path);
  std::vector<double> out;
  out.reserve(node.size());
  for (std::size_t i = 0; i < node.size(); ++i)
    out.push_back(read_number(node[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

template <class Setter>
void maybe(const json& obj, const char* key, Setter&& set) {
  if (auto it = obj.find(key); it != obj.end()) set(*it);
}

void read_model(const json& node, ModelParams& p) {
  require_object(node, "model");
  reject_unknown(node, "model",
                 {"v", "a", "b", "c", "lambda_10_min", "lambda_10_max", "theta1", "theta2",
                  "lambda_01"});
  auto num = [&](const char* key, double& field) {
    maybe(node, key, [&](const json& x) { field = read_number(x, join("model", key)); });
  };
  num("v", p.v);
  num("a", p.a);
  num("b", p.b);
  num("c", p.c);
  num("lambda_10_min", p.lambda_10_min);
  num("lambda_10_max", p.lambda_10_max);
  num("theta1", p.theta1);
  num("theta2", p.theta2);
  num("lambda_01", p.lambda_01);
}

InflowProfile read_inflow(const json& node) {
  if (node.is_number()) return InflowProfile(read_number(node, "inflow"));
  require_object(node, "inflow");
  reject_unknown(node, "inflow", {"times", "rates"});
  if (!node.contains("times") || !node.contains("rates"))
    throw ConfigError("piecewise inflow needs both times and rates", "inflow");
  return InflowProfile(read_numbers(node["times"], "inflow.times"),
                       read_numbers(node["rates"], "inflow.rates"));
}

json inflow_to_json(const InflowProfile& g) {
  if (g.is_constant()) return g.rates().front();
  return json{{"times", g.starts()}, {"rates", g.rates()}};
}

}  // namespace

void RunConfig::validate() const {
  scenario.validate();
  if (n_samples == 0) throw ConfigError("must be >= 1", "run.n_samples");
  if (workers == 0) throw ConfigError("must be >= 1", "run.workers");
  if (output_thinning == 0) throw ConfigError("must be >= 1", "run.output_thinning");
  if (output_dir.empty()) throw ConfigError("must not be empty", "run.output_dir");
}

std::vector<std::string> preset_names() { return {"paper-g1", "paper-g2"}; }

RunConfig preset_config(std::string_view name) {
  double inflow = 0.0;
  if (name == "paper-g1") {
    inflow = 0.5;
  } else if (name == "paper-g2") {
    inflow = 1.5;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'", "preset");
  }
  RunConfig config;
  ModelParams& p = config.scenario.params;
  p.v = 1.0;
  p.a = 0.0;
  p.b = 1.0;
  p.c = 2.0;
  p.lambda_01 = 1.0 / 0.5;
  p.lambda_10_min = 1.0 / 10.0;
  p.lambda_10_max = 1.0 / 0.5;
  p.theta1 = 1.0 / 10.0;
  p.theta2 = 5.0;
  config.scenario.inflow = InflowProfile(inflow);
  config.scenario.rho0.clear();
  config.scenario.q0 = 0.0;
  config.scenario.r0 = MachineStatus::up;
  config.scenario.w0.reset();
  config.scenario.horizon = 50.0;
  config.scenario.dx = 0.1;
  config.scenario.dt = 0.1;
  config.preset = std::string(name);
  return config;
}

RunConfig config_from_json(const json& doc) {
  require_object(doc, "<root>");
  reject_unknown(doc, "",
                 {"preset", "model", "inflow", "initial", "horizon", "dx", "dt", "run",
                  "run_info"});

  RunConfig config;
  if (auto it = doc.find("preset"); it != doc.end()) {
    if (!it->is_string()) throw ConfigError("expected a string", "preset");
    config = preset_config(it->get<std::string>());
  }
  Scenario& s = config.scenario;

  maybe(doc, "model", [&](const json& x) { read_model(x, s.params); });
  maybe(doc, "inflow", [&](const json& x) { s.inflow = read_inflow(x); });
  maybe(doc, "horizon", [&](const json& x) { s.horizon = read_number(x, "horizon"); });
  maybe(doc, "dx", [&](const json& x) { s.dx = read_number(x, "dx"); });
  maybe(doc, "dt", [&](const json& x) { s.dt = read_number(x, "dt"); });

  std::optional<double> uniform_rho0;
  maybe(doc, "initial", [&](const json& init) {
    require_object(init, "initial");
    reject_unknown(init, "initial", {"rho0", "q0", "r0", "w0"});
    maybe(init, "rho0", [&](const json& x) {
      if (x.is_number()) {
        uniform_rho0 = read_number(x, "initial.rho0");
      } else {
        s.rho0 = read_numbers(x, "initial.rho0");
      }
    });
    maybe(init, "q0", [&](const json& x) { s.q0 = read_number(x, "initial.q0"); });
    maybe(init, "r0", [&](const json& x) {
      const auto r = read_unsigned(x, "initial.r0");
      if (r > 1) throw ConfigError("machine status must be 0 or 1", "initial.r0");
      s.r0 = r == 1 ? MachineStatus::up : MachineStatus::down;
    });
    maybe(init, "w0", [&](const json& x) {
      if (x.is_null()) {
        s.w0.reset();
      } else {
        s.w0 = read_number(x, "initial.w0");
      }
    });
  });

  maybe(doc, "run", [&](const json& run) {
    require_object(run, "run");
    reject_unknown(run, "run",
                   {"n_samples", "master_seed", "workers", "output_dir", "output_thinning"});
    maybe(run, "n_samples", [&](const json& x) { config.n_samples = read_unsigned(x, "run.n_samples"); });
    maybe(run, "master_seed", [&](const json& x) { config.master_seed = read_unsigned(x, "run.master_seed"); });
    maybe(run, "workers", [&](const json& x) { config.workers = read_unsigned(x, "run.workers"); });
    maybe(run, "output_thinning",
          [&](const json& x) { config.output_thinning = read_unsigned(x, "run.output_thinning"); });
    maybe(run, "output_dir", [&](const json& x) {
      if (!x.is_string()) throw ConfigError("expected a string", "run.output_dir");
      config.output_dir = x.get<std::string>();
    });
  });

  if (uniform_rho0) {
    if (*uniform_rho0 == 0.0) {
      s.rho0.clear();
    } else {
      s.rho0.assign(s.cells(), *uniform_rho0);
    }
  }
  config.validate();
  return config;
}

json config_to_json(const RunConfig& config) {
  const Scenario& s = config.scenario;
  const ModelParams& p = s.params;
  json doc;
  if (config.preset) doc["preset"] = *config.preset;
  doc["model"] = {{"v", p.v},
                  {"a", p.a},
                  {"b", p.b},
                  {"c", p.c},
                  {"lambda_10_min", p.lambda_10_min},
                  {"lambda_10_max", p.lambda_10_max},
                  {"theta1", p.theta1},
                  {"theta2", p.theta2},
                  {"lambda_01", p.lambda_01}};
  doc["inflow"] = inflow_to_json(s.inflow);
  doc["initial"] = {{"rho0", s.rho0.empty() ? json(0.0) : json(s.rho0)},
                    {"q0", s.q0},
                    {"r0", s.r0 == MachineStatus::up ? 1 : 0},
                    {"w0", s.w0 ? json(*s.w0) : json(nullptr)}};
  doc["horizon"] = s.horizon;
  doc["dx"] = s.dx;
  doc["dt"] = s.dt;
  doc["run"] = {{"n_samples", config.n_samples},
                {"master_seed", config.master_seed},
                {"workers", config.workers},
                {"output_dir", config.output_dir},
                {"output_thinning", config.output_thinning}};
  return doc;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("parse error: ") + e.what(), path.string());
  }
  return config_from_json(doc);
}

}  // namespace pdmpline
