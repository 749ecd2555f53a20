#include "scg/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "scg/error.hpp"

namespace scg {
namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::kSchemaError, path + ": " + what);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

const Json& field(const Json& object, const char* key, const std::string& path) {
  if (!object.is_object()) schema_error(path.empty() ? "(root)" : path, "expected an object");
  auto it = object.find(key);
  if (it == object.end()) schema_error(join(path, key), "missing");
  return *it;
}

std::string index(const std::string& path, std::size_t k) {
  return path + "[" + std::to_string(k) + "]";
}

Rational rational_at(const Json& value, const std::string& path) {
  try {
    if (value.is_string()) return parse_rational(value.get<std::string>());
    if (value.is_number()) return parse_rational(value.dump());
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
  schema_error(path, "expected a number or numeric string");
}

double double_at(const Json& value, const std::string& path) {
  try {
    if (value.is_string()) return parse_probability(value.get<std::string>());
    if (value.is_number()) return value.get<double>();
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
  schema_error(path, "expected a number or numeric string");
}

int int_at(const Json& value, const std::string& path) {
  if (!value.is_number_integer()) schema_error(path, "expected an integer");
  const auto v = value.get<long long>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    schema_error(path, "integer out of range");
  }
  return static_cast<int>(v);
}

std::string string_at(const Json& value, const std::string& path) {
  if (!value.is_string()) schema_error(path, "expected a string");
  return value.get<std::string>();
}

const Json& array_at(const Json& value, const std::string& path) {
  if (!value.is_array()) schema_error(path, "expected an array");
  return value;
}

std::vector<int> int_array(const Json& value, const std::string& path) {
  std::vector<int> out;
  const Json& arr = array_at(value, path);
  for (std::size_t k = 0; k < arr.size(); ++k) out.push_back(int_at(arr[k], index(path, k)));
  return out;
}

int state_by_name(const Instance& inst, const Json& value, const std::string& path) {
  const std::string name = string_at(value, path);
  const int s = inst.state_index(name);
  if (s < 0) schema_error(path, "unknown state '" + name + "'");
  return s;
}

std::vector<double> state_map(const Instance& inst, const Json& value, const std::string& path) {
  if (!value.is_object()) schema_error(path, "expected an object keyed by state name");
  std::vector<double> out(inst.num_states(), 0.0);
  for (auto it = value.begin(); it != value.end(); ++it) {
    const int s = inst.state_index(it.key());
    if (s < 0) schema_error(join(path, it.key()), "unknown state");
    out[s] = double_at(it.value(), join(path, it.key()));
  }
  return out;
}

Json state_map_json(const Instance& inst, const std::vector<double>& values) {
  Json out = Json::object();
  for (int s = 0; s < inst.num_states(); ++s) out[inst.state_name(s)] = format_double(values[s]);
  return out;
}

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::kParseError, e.what());
  }
}

std::string slurp(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::kParseError, "cannot open " + path);
  std::stringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

}  // namespace

Json instance_to_json(const Instance& inst) {
  Json doc = Json::object();
  doc["name"] = inst.name();
  doc["num_agents"] = inst.num_agents();
  doc["resources"] = inst.raw().resources;
  Json sets = Json::array();
  for (int i = 0; i < inst.num_agents(); ++i) {
    sets.push_back(std::vector<int>(inst.action_set(i).begin(), inst.action_set(i).end()));
  }
  doc["action_sets"] = std::move(sets);
  Json states = Json::array();
  for (int s = 0; s < inst.num_states(); ++s) {
    Json state = Json::object();
    state["name"] = inst.state_name(s);
    state["prior"] = format_rational(inst.prior(s));
    Json costs = Json::object();
    for (int r = 0; r < inst.num_resources(); ++r) {
      Json column = Json::array();
      for (int n = 1; n <= inst.num_agents(); ++n) column.push_back(format_rational(inst.cost(s, r, n)));
      costs[inst.resource_name(r)] = std::move(column);
    }
    state["costs"] = std::move(costs);
    states.push_back(std::move(state));
  }
  doc["states"] = std::move(states);
  return doc;
}

Instance instance_from_json(const Json& doc) {
  if (!doc.is_object()) schema_error("(root)", "expected an object");
  RawInstance raw;
  raw.name = doc.contains("name") ? string_at(doc["name"], "name") : std::string();
  raw.num_agents = int_at(field(doc, "num_agents", ""), "num_agents");
  const Json& resources = array_at(field(doc, "resources", ""), "resources");
  for (std::size_t k = 0; k < resources.size(); ++k) {
    raw.resources.push_back(string_at(resources[k], index("resources", k)));
  }
  for (std::size_t a = 0; a < raw.resources.size(); ++a) {
    for (std::size_t b = a + 1; b < raw.resources.size(); ++b) {
      if (raw.resources[a] == raw.resources[b]) {
        schema_error(index("resources", b), "duplicate resource name");
      }
    }
  }
  const Json& sets = array_at(field(doc, "action_sets", ""), "action_sets");
  for (std::size_t k = 0; k < sets.size(); ++k) {
    raw.action_sets.push_back(int_array(sets[k], index("action_sets", k)));
  }
  const Json& states = array_at(field(doc, "states", ""), "states");
  const int r_count = static_cast<int>(raw.resources.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    const std::string path = index("states", k);
    const Json& state = states[k];
    RawState out;
    out.name = string_at(field(state, "name", path), join(path, "name"));
    out.prior = rational_at(field(state, "prior", path), join(path, "prior"));
    const Json& costs = field(state, "costs", path);
    if (!costs.is_object()) schema_error(join(path, "costs"), "expected an object");
    out.costs.resize(r_count);
    for (auto it = costs.begin(); it != costs.end(); ++it) {
      const std::string cpath = join(join(path, "costs"), it.key());
      auto pos = std::find(raw.resources.begin(), raw.resources.end(), it.key());
      if (pos == raw.resources.end()) schema_error(cpath, "unknown resource");
      const Json& column = array_at(it.value(), cpath);
      auto& target = out.costs[pos - raw.resources.begin()];
      for (std::size_t n = 0; n < column.size(); ++n) {
        target.push_back(rational_at(column[n], index(cpath, n)));
      }
    }
    for (int r = 0; r < r_count; ++r) {
      if (out.costs[r].empty() && raw.num_agents > 0) {
        schema_error(join(join(path, "costs"), raw.resources[r]), "missing");
      }
    }
    raw.states.push_back(std::move(out));
  }
  for (std::size_t a = 0; a < raw.states.size(); ++a) {
    for (std::size_t b = a + 1; b < raw.states.size(); ++b) {
      if (raw.states[a].name == raw.states[b].name) {
        schema_error(join(index("states", b), "name"), "duplicate state name");
      }
    }
  }
  return validate_instance(std::move(raw));
}

Instance parse_instance(const std::string& text) { return instance_from_json(parse_text(text)); }

std::string canonical_instance_text(const Instance& inst) {
  return instance_to_json(inst).dump(2) + "\n";
}

Instance read_instance(const std::string& path) { return parse_instance(slurp(path)); }

void write_json(const std::string& path, const Json& doc) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::kParseError, "cannot write " + path);
  file << doc.dump(2) << "\n";
}

Json read_json(const std::string& path) { return parse_text(slurp(path)); }

void write_instance(const std::string& path, const Instance& inst) {
  write_json(path, instance_to_json(inst));
}

std::string instance_digest(const Instance& inst) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : canonical_instance_text(inst)) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

Json public_scheme_to_json(const Instance& inst, const PublicScheme& scheme) {
  Json signals = Json::array();
  for (const PublicSignal& signal : scheme.signals) {
    Json out = Json::object();
    out["probability"] = format_double(signal.probability);
    out["emission"] = state_map_json(inst, signal.emission);
    out["posterior"] = state_map_json(inst, signal.posterior);
    out["recommended_config"] = signal.recommended_config;
    out["recommended_assignment"] = signal.recommended_assignment;
    out["expected_cost"] = format_double(signal.expected_cost);
    signals.push_back(std::move(out));
  }
  Json doc = Json::object();
  doc["kind"] = "public";
  doc["signals"] = std::move(signals);
  return doc;
}

PublicScheme public_scheme_from_json(const Instance& inst, const Json& doc) {
  if (string_at(field(doc, "kind", ""), "kind") != "public") {
    schema_error("kind", "expected \"public\"");
  }
  const Json& signals = array_at(field(doc, "signals", ""), "signals");
  PublicScheme scheme;
  for (std::size_t k = 0; k < signals.size(); ++k) {
    const std::string path = index("signals", k);
    PublicSignal signal;
    signal.emission = state_map(inst, field(signals[k], "emission", path), join(path, "emission"));
    signal.posterior =
        state_map(inst, field(signals[k], "posterior", path), join(path, "posterior"));
    signal.recommended_config = int_array(field(signals[k], "recommended_config", path),
                                          join(path, "recommended_config"));
    signal.recommended_assignment = int_array(field(signals[k], "recommended_assignment", path),
                                              join(path, "recommended_assignment"));
    for (int s = 0; s < inst.num_states(); ++s) {
      signal.probability += inst.prior_value(s) * signal.emission[s];
    }
    scheme.signals.push_back(std::move(signal));
  }
  validate_public_scheme(inst, scheme);
  for (PublicSignal& signal : scheme.signals) {
    const CostTable<double> costs =
        expected_cost_functions<double>(inst, std::span<const double>(signal.posterior));
    signal.expected_cost = social_cost(costs, signal.recommended_config);
  }
  return scheme;
}

Json private_scheme_to_json(const Instance& inst, const ReducedForm& reduced,
                            const ExplicitScheme* explicit_scheme) {
  Json entries = Json::array();
  for (const ReducedEntry& e : reduced.entries) {
    entries.push_back(Json::array({inst.state_name(e.state), reduced.configurations.at(e.config),
                                   e.agent, e.resource, format_double(e.value)}));
  }
  Json doc = Json::object();
  doc["kind"] = "private";
  doc["reduced_form"] = std::move(entries);
  if (explicit_scheme != nullptr) {
    Json rows = Json::array();
    for (const ExplicitEntry& e : explicit_scheme->entries) {
      Json row = Json::object();
      row["state"] = inst.state_name(e.state);
      row["profile"] = e.profile;
      row["prob"] = format_double(e.probability);
      rows.push_back(std::move(row));
    }
    doc["explicit"] = std::move(rows);
  }
  return doc;
}

PrivateDocument private_scheme_from_json(const Instance& inst, const Json& doc) {
  if (string_at(field(doc, "kind", ""), "kind") != "private") {
    schema_error("kind", "expected \"private\"");
  }
  PrivateDocument out;
  out.reduced.configurations = enumerate_configurations(inst);
  std::map<Configuration, int> config_index;
  for (std::size_t c = 0; c < out.reduced.configurations.size(); ++c) {
    config_index.emplace(out.reduced.configurations[c], static_cast<int>(c));
  }
  const Json& entries = array_at(field(doc, "reduced_form", ""), "reduced_form");
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const std::string path = index("reduced_form", k);
    const Json& row = array_at(entries[k], path);
    if (row.size() != 5) schema_error(path, "expected [state, config, agent, resource, value]");
    ReducedEntry e{};
    e.state = state_by_name(inst, row[0], index(path, 0));
    const Configuration n = int_array(row[1], index(path, 1));
    auto it = config_index.find(n);
    if (it == config_index.end()) schema_error(index(path, 1), "not a feasible configuration");
    e.config = it->second;
    e.agent = int_at(row[2], index(path, 2));
    e.resource = int_at(row[3], index(path, 3));
    if (e.agent < 0 || e.agent >= inst.num_agents()) schema_error(index(path, 2), "unknown agent");
    if (e.resource < 0 || e.resource >= inst.num_resources()) {
      schema_error(index(path, 3), "unknown resource");
    }
    e.value = double_at(row[4], index(path, 4));
    out.reduced.entries.push_back(e);
  }
  if (doc.contains("explicit")) {
    const Json& rows = array_at(doc["explicit"], "explicit");
    ExplicitScheme scheme;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const std::string path = index("explicit", k);
      ExplicitEntry e;
      e.state = state_by_name(inst, field(rows[k], "state", path), join(path, "state"));
      e.profile = int_array(field(rows[k], "profile", path), join(path, "profile"));
      e.probability = double_at(field(rows[k], "prob", path), join(path, "prob"));
      scheme.entries.push_back(std::move(e));
    }
    validate_explicit_scheme(inst, scheme);
    out.explicit_scheme = std::move(scheme);
  }
  return out;
}

SchemeDocument read_scheme(const std::string& path, const Instance& inst) {
  const Json doc = read_json(path);
  SchemeDocument out;
  out.kind = string_at(field(doc, "kind", ""), "kind");
  if (out.kind == "public") {
    out.public_scheme = public_scheme_from_json(inst, doc);
  } else if (out.kind == "private") {
    out.private_scheme = private_scheme_from_json(inst, doc);
  } else {
    schema_error("kind", "expected \"public\" or \"private\"");
  }
  return out;
}

}  // namespace scg
