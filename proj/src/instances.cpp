#include "scg/instances.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "scg/error.hpp"

namespace scg {
namespace {

std::vector<Rational> constant_column(int n, const Rational& value) {
  return std::vector<Rational>(n, value);
}

std::vector<Rational> integer_column(std::initializer_list<int> values) {
  std::vector<Rational> out;
  for (int v : values) out.emplace_back(v);
  return out;
}

[[noreturn]] void graph_error(const std::string& what) {
  throw Error(ErrorKind::kGraphInvariantViolated, what);
}

}  // namespace

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  while (true) {
    const std::uint64_t draw = rng();
    if (draw < limit) return draw % bound;
  }
}

Instance gen_table1(std::span<const Rational> prior) {
  RawInstance raw;
  raw.name = "table1";
  raw.num_agents = 3;
  raw.resources = {"r1", "r2"};
  raw.action_sets.assign(3, {0, 1});
  const Rational half(1, 2);
  if (!prior.empty() && prior.size() != 2) {
    throw Error(ErrorKind::kDimensionMismatch, "table1 prior needs two entries");
  }
  raw.states.push_back({"theta1", prior.empty() ? half : prior[0],
                        {integer_column({1, 1, 10}), integer_column({9, 10, 10})}});
  raw.states.push_back({"theta2", prior.empty() ? half : prior[1],
                        {integer_column({1, 1, 4}), integer_column({5, 5, 10})}});
  return validate_instance(std::move(raw));
}

Instance gen_figure1(int num_agents, const Rational& eps, const Rational& wrong_state_cost) {
  if (num_agents < 2) throw Error(ErrorKind::kInvalidParams, "figure1 needs N >= 2");
  if (eps <= 0) throw Error(ErrorKind::kInvalidParams, "figure1 needs eps > 0");
  if (wrong_state_cost < 2) {
    throw Error(ErrorKind::kInvalidParams, "figure1 needs a wrong-state cost of at least 2");
  }
  std::vector<Rational> cheap(num_agents, Rational(0));
  cheap.back() = 1;
  const auto flat = constant_column(num_agents, wrong_state_cost);
  const auto fallback = constant_column(num_agents, 1 + eps);

  RawInstance raw;
  raw.name = "figure1-N" + std::to_string(num_agents);
  raw.num_agents = num_agents;
  raw.resources = {"r1", "r2", "r3"};
  raw.action_sets.assign(num_agents, {0, 1, 2});
  raw.states.push_back({"theta1", Rational(1, 2), {cheap, flat, fallback}});
  raw.states.push_back({"theta2", Rational(1, 2), {flat, cheap, fallback}});
  return validate_instance(std::move(raw));
}

ExplicitScheme figure1_partial_reveal_scheme(const Instance& inst) {
  if (inst.num_states() != 2 || inst.num_resources() != 3) {
    throw Error(ErrorKind::kInvalidParams, "not a figure1 instance");
  }
  const int n = inst.num_agents();
  ExplicitScheme scheme;
  for (int s = 0; s < 2; ++s) {
    for (int uninformed = 0; uninformed < n; ++uninformed) {
      ActionProfile profile(n, s);
      profile[uninformed] = 2;
      scheme.entries.push_back({s, std::move(profile), 1.0 / n});
    }
  }
  std::sort(scheme.entries.begin(), scheme.entries.end(),
            [](const ExplicitEntry& a, const ExplicitEntry& b) {
              return std::tie(a.state, a.profile) < std::tie(b.state, b.profile);
            });
  return scheme;
}

void validate_graph(const GraphSpec& graph) {
  const int r = graph.num_vertices;
  if (r < 1) graph_error("graph needs at least one vertex");
  std::set<std::pair<int, int>> seen;
  std::vector<int> degree(r, 0);
  for (const auto& [u, v] : graph.edges) {
    if (u < 0 || u >= r || v < 0 || v >= r) graph_error("edge endpoint out of range");
    if (u == v) graph_error("self-loop at vertex " + std::to_string(u + 1));
    if (!seen.insert({std::min(u, v), std::max(u, v)}).second) {
      graph_error("duplicate edge " + std::to_string(u + 1) + "-" + std::to_string(v + 1));
    }
    ++degree[u];
    ++degree[v];
  }
  if (r > 1) {
    for (int v = 0; v < r; ++v) {
      if (degree[v] == r - 1) {
        graph_error("vertex " + std::to_string(v + 1) + " is adjacent to all others");
      }
    }
  }
  std::set<int> colored;
  for (std::size_t k = 0; k < graph.color_classes.size(); ++k) {
    const auto& cls = graph.color_classes[k];
    for (int v : cls) {
      if (v < 0 || v >= r) graph_error("colored vertex out of range");
      if (!colored.insert(v).second) {
        graph_error("vertex " + std::to_string(v + 1) + " has more than one color");
      }
    }
    for (int a : cls) {
      for (int b : cls) {
        if (a < b && seen.count({a, b})) {
          graph_error("color class " + std::to_string(k + 1) + " contains edge " +
                      std::to_string(a + 1) + "-" + std::to_string(b + 1));
        }
      }
    }
  }
}

GraphSpec parse_edge_list(std::string_view text) {
  GraphSpec graph;
  int declared = -1;
  int largest = 0;
  std::map<int, std::vector<int>> classes;
  std::istringstream input{std::string(text)};
  std::string line;
  int line_number = 0;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::kParseError, "line " + std::to_string(line_number) + ": " + what);
  };
  auto vertex = [&](long label) {
    if (label < 1) fail("vertex labels start at 1");
    largest = std::max(largest, static_cast<int>(label));
    return static_cast<int>(label) - 1;
  };
  while (std::getline(input, line)) {
    ++line_number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string head;
    if (!(fields >> head)) continue;
    if (head == "vertices") {
      long count = 0;
      if (!(fields >> count) || count < 1) fail("expected a positive vertex count");
      declared = static_cast<int>(count);
    } else if (head == "color") {
      long color = 0;
      if (!(fields >> color) || color < 1) fail("expected a positive color index");
      long label = 0;
      while (fields >> label) classes[static_cast<int>(color)].push_back(vertex(label));
      if (!fields.eof()) fail("bad vertex label in color line");
    } else {
      long u = 0;
      long v = 0;
      try {
        std::size_t used = 0;
        u = std::stol(head, &used);
        if (used != head.size()) fail("bad vertex label '" + head + "'");
      } catch (const std::logic_error&) {
        fail("unknown directive '" + head + "'");
      }
      if (!(fields >> v)) fail("edge needs two endpoints");
      std::string extra;
      if (fields >> extra) fail("trailing text '" + extra + "'");
      graph.edges.emplace_back(vertex(u), vertex(v));
    }
  }
  if (declared >= 0 && largest > declared) {
    throw Error(ErrorKind::kParseError, "vertex " + std::to_string(largest) +
                                            " exceeds declared count " +
                                            std::to_string(declared));
  }
  graph.num_vertices = declared >= 0 ? declared : largest;
  for (auto& [color, members] : classes) graph.color_classes.push_back(std::move(members));
  return graph;
}

GraphSpec read_graph(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw Error(ErrorKind::kParseError, "cannot open graph file " + path);
  std::stringstream buffer;
  buffer << file.rdbuf();
  return parse_edge_list(buffer.str());
}

Instance gen_hardness(const GraphSpec& graph, int q, int k, const Rational& eps) {
  validate_graph(graph);
  if (q < 1 || k < 1) throw Error(ErrorKind::kInvalidParams, "q and k must be positive");
  if (eps < 0 || eps >= 1) throw Error(ErrorKind::kInvalidParams, "eps must lie in [0, 1)");
  const int r = graph.num_vertices;
  const Rational agents = (1 - eps) * r / q;
  if (boost::multiprecision::denominator(agents) != 1 || agents < 1) {
    throw Error(ErrorKind::kNonIntegerAgentCount,
                "(1 - eps) R / q = " + format_rational(agents) + " is not a positive integer");
  }
  const int n = agents.convert_to<int>();
  std::vector<std::vector<char>> adjacent(r, std::vector<char>(r, 0));
  for (const auto& [u, v] : graph.edges) adjacent[u][v] = adjacent[v][u] = 1;

  std::vector<Rational> good(n);
  for (int m = 1; m <= n; ++m) good[m - 1] = 1 - Rational(1, m * m);

  RawInstance raw;
  raw.name = "hardness-R" + std::to_string(r) + "-q" + std::to_string(q);
  raw.num_agents = n;
  raw.resources.push_back("backup");
  for (int v = 0; v < r; ++v) raw.resources.push_back("v" + std::to_string(v + 1));
  std::vector<int> all(r + 1);
  for (int j = 0; j <= r; ++j) all[j] = j;
  raw.action_sets.assign(n, all);
  for (int theta = 0; theta < r; ++theta) {
    RawState state{"v" + std::to_string(theta + 1), Rational(1, r), {}};
    state.costs.push_back(constant_column(n, Rational(1)));
    for (int v = 0; v < r; ++v) {
      if (v == theta) {
        state.costs.push_back(good);
      } else if (adjacent[theta][v]) {
        state.costs.push_back(constant_column(n, Rational(3)));
      } else {
        state.costs.push_back(constant_column(n, Rational(1)));
      }
    }
    raw.states.push_back(std::move(state));
  }
  return validate_instance(std::move(raw));
}

PublicScheme coloring_scheme(const Instance& inst, const GraphSpec& graph) {
  validate_graph(graph);
  const int r = graph.num_vertices;
  if (inst.num_states() != r || inst.num_resources() != r + 1) {
    throw Error(ErrorKind::kDimensionMismatch, "instance was not built from this graph");
  }
  std::vector<char> colored(r, 0);
  std::vector<std::vector<double>> emission;
  for (std::size_t k = 0; k < graph.color_classes.size(); ++k) {
    const auto& cls = graph.color_classes[k];
    if (static_cast<int>(cls.size()) != inst.num_agents()) {
      throw Error(ErrorKind::kClassSizeMismatch,
                  "color class " + std::to_string(k + 1) + " has " +
                      std::to_string(cls.size()) + " vertices, expected N = " +
                      std::to_string(inst.num_agents()));
    }
    std::vector<double> row(r, 0.0);
    for (int v : cls) {
      row[v] = 1.0;
      colored[v] = 1;
    }
    emission.push_back(std::move(row));
  }
  std::vector<double> uncolored(r, 0.0);
  for (int v = 0; v < r; ++v) uncolored[v] = colored[v] ? 0.0 : 1.0;
  emission.push_back(std::move(uncolored));
  return make_public_scheme(inst, emission);
}

Instance gen_random(const RandomInstanceParams& params) {
  if (params.num_agents < 1 || params.num_resources < 1 || params.num_states < 1 ||
      params.max_cost < 0) {
    throw Error(ErrorKind::kInvalidParams, "random instance sizes must be positive");
  }
  std::mt19937_64 rng(params.seed);
  const int n = params.num_agents;
  const int r = params.num_resources;
  const int states = params.num_states;

  RawInstance raw;
  raw.name = "random-N" + std::to_string(n) + "-R" + std::to_string(r) + "-S" +
             std::to_string(states) + "-seed" + std::to_string(params.seed);
  raw.num_agents = n;
  for (int j = 0; j < r; ++j) raw.resources.push_back("r" + std::to_string(j + 1));
  for (int i = 0; i < n; ++i) {
    std::vector<int> actions;
    if (params.asymmetric) {
      const std::uint64_t mask = 1 + uniform_below(rng, (std::uint64_t{1} << r) - 1);
      for (int j = 0; j < r; ++j) {
        if ((mask >> j) & 1) actions.push_back(j);
      }
    } else {
      for (int j = 0; j < r; ++j) actions.push_back(j);
    }
    raw.action_sets.push_back(std::move(actions));
  }

  const int denominator = std::max(1000, states);
  std::set<int> cuts;
  while (static_cast<int>(cuts.size()) < states - 1) {
    cuts.insert(1 + static_cast<int>(uniform_below(rng, denominator - 1)));
  }
  std::vector<int> bounds = {0};
  bounds.insert(bounds.end(), cuts.begin(), cuts.end());
  bounds.push_back(denominator);

  for (int s = 0; s < states; ++s) {
    RawState state{"s" + std::to_string(s + 1),
                   Rational(bounds[s + 1] - bounds[s], denominator), {}};
    for (int j = 0; j < r; ++j) {
      std::vector<int> draws(n);
      for (int& d : draws) d = static_cast<int>(uniform_below(rng, params.max_cost + 1));
      std::sort(draws.begin(), draws.end());
      std::vector<Rational> column;
      for (int d : draws) column.emplace_back(d);
      state.costs.push_back(std::move(column));
    }
    raw.states.push_back(std::move(state));
  }
  return validate_instance(std::move(raw));
}

}  // namespace scg
