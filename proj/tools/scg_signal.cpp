// scg-signal: generate instances, solve for optimal public/private schemes,
// verify, sample and compare them. A JSON run report goes to stdout and a
// readable table to stderr.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "scg/error.hpp"
#include "scg/instances.hpp"
#include "scg/io.hpp"
#include "scg/private_signaling.hpp"
#include "scg/public_signaling.hpp"

namespace {

using scg::Error;
using scg::ErrorKind;
using scg::Instance;
using scg::Json;

enum ExitCode {
  kOk = 0,
  kInputError = 2,
  kSizeGuard = 3,
  kNumerical = 4,
  kViolation = 5,
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kSizeGuard:
      return kSizeGuard;
    case ErrorKind::kNumericalFailure:
    case ErrorKind::kMaxRoundsExceeded:
      return kNumerical;
    case ErrorKind::kInvalidScheme:
    case ErrorKind::kInfeasibleMarginals:
    case ErrorKind::kDegenerateConfiguration:
      return kViolation;
    default:
      return kInputError;
  }
}

struct Globals {
  int threads = 0;
  double tolerance = 1e-7;
  std::optional<double> max_size;
};

int resolve_threads(int requested) {
  if (const char* env = std::getenv("SCG_SIGNAL_THREADS")) {
    try {
      const int value = std::stoi(env);
      if (value > 0) return value;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::kInvalidParams, "SCG_SIGNAL_THREADS must be a positive integer");
  }
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

scg::SolveOptions solve_options(const Globals& globals) {
  scg::SolveOptions options;
  options.threads = resolve_threads(globals.threads);
  options.lp.feasibility_tolerance = globals.tolerance;
  if (globals.max_size) {
    auto& limits = options.limits;
    limits.configurations = limits.signatures = limits.profiles = limits.explicit_cells =
        limits.reduced_cells = *globals.max_size;
  }
  return options;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Collects the run report and the stderr table for one command.
class Run {
 public:
  Run(std::string command, const Globals& globals) {
    report_["command"] = std::move(command);
    report_["values"] = Json::object();
    report_["timings"] = Json::object();
    report_["tolerance"] = globals.tolerance;
    report_["seed"] = nullptr;
  }

  void set_instance(const Instance& inst) {
    report_["instance"] = inst.name();
    report_["digest"] = scg::instance_digest(inst);
  }
  void value(const std::string& key, double v) {
    report_["values"][key] = v;
    rows_.emplace_back(key, scg::format_double(v));
  }
  void timing(const std::string& key, double seconds) { report_["timings"][key] = seconds; }
  void note(const std::string& key, const std::string& text) { rows_.emplace_back(key, text); }
  Json& operator[](const char* key) { return report_[key]; }

  int finish(int code) {
    report_["exit_code"] = code;
    std::cout << report_.dump(2) << "\n";
    std::size_t width = 0;
    for (const auto& [k, v] : rows_) width = std::max(width, k.size());
    for (const auto& [k, v] : rows_) {
      std::cerr << k << std::string(width - k.size() + 2, ' ') << v << "\n";
    }
    return code;
  }

  int fail(const Error& e) {
    report_["error"] = {{"kind", std::string(scg::to_string(e.kind()))}, {"message", e.what()}};
    rows_.emplace_back("error", e.what());
    return finish(exit_code_for(e.kind()));
  }

 private:
  Json report_ = Json::object();
  std::vector<std::pair<std::string, std::string>> rows_;
};

void emit_document(Run& run, const Json& doc, const std::string& out) {
  if (out.empty()) {
    run["document"] = doc;
  } else {
    scg::write_json(out, doc);
    run["output"] = out;
  }
}

// Runs body and maps library errors to exit codes.
template <typename Body>
int guarded(Run& run, Body body) {
  try {
    return body();
  } catch (const Error& e) {
    return run.fail(e);
  } catch (const std::exception& e) {
    return run.fail(Error(ErrorKind::kParseError, e.what()));
  }
}

std::vector<scg::Rational> parse_rational_list(const std::string& text) {
  std::vector<scg::Rational> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) out.push_back(scg::parse_rational(item));
  return out;
}

// ---- generate ------------------------------------------------------------

struct GenerateArgs {
  std::string out;
  std::string prior;
  int n = 5;
  std::string eps = "0.01";
  std::string wrong_cost = "2";
  std::string hardness_eps = "0";
  std::string graph;
  int q = 2;
  int k = 1;
  int r = 2;
  int states = 2;
  std::uint64_t seed = 1;
  bool asymmetric = false;
  int max_cost = 10;
};

int cmd_generate(const std::string& kind, const GenerateArgs& args, const Globals& globals) {
  Run run("generate " + kind, globals);
  return guarded(run, [&] {
    std::optional<Instance> inst;
    if (kind == "table1") {
      inst = scg::gen_table1(parse_rational_list(args.prior));
    } else if (kind == "figure1") {
      inst = scg::gen_figure1(args.n, scg::parse_rational(args.eps),
                              scg::parse_rational(args.wrong_cost));
    } else if (kind == "hardness") {
      inst = scg::gen_hardness(scg::read_graph(args.graph), args.q, args.k,
                               scg::parse_rational(args.hardness_eps));
    } else {
      run["seed"] = args.seed;
      inst = scg::gen_random({args.n, args.r, args.states, args.seed, args.asymmetric,
                              args.max_cost});
    }
    run.set_instance(*inst);
    run.note("instance", inst->name());
    run.note("agents", std::to_string(inst->num_agents()));
    run.note("resources", std::to_string(inst->num_resources()));
    run.note("states", std::to_string(inst->num_states()));
    emit_document(run, scg::instance_to_json(*inst), args.out);
    return run.finish(kOk);
  });
}

// ---- solve ---------------------------------------------------------------

struct SolveArgs {
  std::string mode;
  std::string in;
  std::string out;
  std::string selection = "best";
  bool with_explicit = false;
};

scg::Selection parse_selection(const std::string& text) {
  return text == "worst" ? scg::Selection::kWorst : scg::Selection::kBest;
}

int cmd_solve(const SolveArgs& args, const Globals& globals) {
  Run run("solve " + args.mode, globals);
  return guarded(run, [&] {
    const Instance inst = scg::read_instance(args.in);
    run.set_instance(inst);
    const scg::SolveOptions options = solve_options(globals);
    run["threads"] = options.threads;
    Stopwatch clock;
    if (args.mode == "public") {
      const auto sol = scg::solve_optimal_public(inst, options);
      run.timing("solve_seconds", clock.seconds());
      run.value("public", sol.value);
      run.value("public_" + args.selection,
                scg::evaluate_public_scheme(inst, sol.scheme, parse_selection(args.selection),
                                            options.limits.configurations));
      run["signals"] = sol.scheme.signals.size();
      run["regions"] = sol.blocks;
      emit_document(run, scg::public_scheme_to_json(inst, sol.scheme), args.out);
      return run.finish(kOk);
    }
    const auto sol = args.mode == "ce" ? scg::solve_optimal_ce(inst, options)
                                       : scg::solve_optimal_private(inst, options);
    run.timing("solve_seconds", clock.seconds());
    run.value(args.mode == "ce" ? "ce" : "private", sol.value);
    run["cells"] = sol.reduced.entries.size();
    const auto report = scg::check_reduced_feasibility(inst, sol.reduced, globals.tolerance);
    if (!report.ok()) {
      run.note("feasibility", "VIOLATED");
      return run.finish(kViolation);
    }
    std::optional<scg::ExplicitScheme> explicit_scheme;
    if (args.with_explicit) {
      Stopwatch decompose;
      explicit_scheme = scg::explicit_from_reduced(inst, sol.reduced, options);
      run.timing("decompose_seconds", decompose.seconds());
      run["support"] = explicit_scheme->entries.size();
    }
    emit_document(run,
                  scg::private_scheme_to_json(inst, sol.reduced,
                                              explicit_scheme ? &*explicit_scheme : nullptr),
                  args.out);
    return run.finish(kOk);
  });
}

// ---- verify --------------------------------------------------------------

Json violations_json(const scg::Report& report) {
  Json out = Json::array();
  for (const auto& v : report.violations) {
    out.push_back({{"constraint", v.constraint}, {"where", v.where}, {"residual", v.residual}});
  }
  return out;
}

int cmd_verify(const std::string& scheme_path, const std::string& in, const Globals& globals) {
  Run run("verify", globals);
  return guarded(run, [&] {
    const Instance inst = scg::read_instance(in);
    run.set_instance(inst);
    const scg::SolveOptions options = solve_options(globals);
    const Json doc = scg::read_json(scheme_path);
    const std::string kind = doc.value("kind", "");
    scg::Report report;
    try {
      if (kind == "public") {
        const auto scheme = scg::public_scheme_from_json(inst, doc);
        scg::validate_public_scheme(inst, scheme, globals.tolerance);
        run.value("public_best", scg::evaluate_public_scheme(inst, scheme, scg::Selection::kBest,
                                                             options.limits.configurations));
        run.value("public_worst", scg::evaluate_public_scheme(
                                      inst, scheme, scg::Selection::kWorst,
                                      options.limits.configurations));
      } else {
        const auto loaded = scg::private_scheme_from_json(inst, doc);
        report = scg::check_reduced_feasibility(inst, loaded.reduced, globals.tolerance);
        for (const auto& term : scg::obedience_terms(inst, loaded.reduced)) {
          if (term.value > globals.tolerance) {
            report.violations.push_back(
                {"obedience",
                 "agent " + std::to_string(term.agent) + " " + inst.resource_name(term.from) +
                     " -> " + inst.resource_name(term.to),
                 term.value});
          }
        }
        run.value("private", scg::reduced_cost(inst, loaded.reduced));
        if (loaded.explicit_scheme) {
          const auto explicit_report =
              scg::check_obedience(inst, *loaded.explicit_scheme, globals.tolerance);
          report.violations.insert(report.violations.end(), explicit_report.violations.begin(),
                                   explicit_report.violations.end());
          run.value("explicit", scg::explicit_cost(inst, *loaded.explicit_scheme));
        }
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kInvalidScheme) throw;
      report.violations.push_back({"scheme", e.what(), 0.0});
    }
    run["violations"] = violations_json(report);
    run["verdict"] = report.ok() ? "OK" : "VIOLATION";
    for (const auto& v : report.violations) {
      run.note(v.constraint, v.where + " residual " + scg::format_double(v.residual));
    }
    run.note("verdict", report.ok() ? "OK" : "VIOLATION");
    return run.finish(report.ok() ? kOk : kViolation);
  });
}

// ---- sample --------------------------------------------------------------

int cmd_sample(const std::string& scheme_path, const std::string& in, const std::string& state,
               std::uint64_t seed, int draws, const Globals& globals) {
  Run run("sample", globals);
  run["seed"] = seed;
  return guarded(run, [&] {
    const Instance inst = scg::read_instance(in);
    run.set_instance(inst);
    const auto loaded = scg::private_scheme_from_json(inst, scg::read_json(scheme_path));
    int s = inst.state_index(state);
    if (s < 0) {
      try {
        s = std::stoi(state);
      } catch (const std::exception&) {
        s = -1;
      }
    }
    if (s < 0 || s >= inst.num_states()) {
      throw Error(ErrorKind::kInvalidParams, "unknown state " + state);
    }
    if (draws < 0) throw Error(ErrorKind::kInvalidParams, "draws must be non-negative");
    scg::PrivateSampler sampler(inst, loaded.reduced);
    std::mt19937_64 rng(seed);
    Json out = Json::array();
    for (int k = 0; k < draws; ++k) out.push_back(sampler.sample(s, rng));
    run["state"] = inst.state_name(s);
    run["draws"] = std::move(out);
    run.note("state", inst.state_name(s));
    run.note("draws", std::to_string(draws));
    return run.finish(kOk);
  });
}

// ---- compare -------------------------------------------------------------

int cmd_compare(const std::string& in, const Globals& globals) {
  Run run("compare", globals);
  return guarded(run, [&] {
    const Instance inst = scg::read_instance(in);
    run.set_instance(inst);
    const scg::SolveOptions options = solve_options(globals);
    const double cap = options.limits.configurations;
    Stopwatch clock;
    const double priv = scg::solve_optimal_private(inst, options).value;
    run.timing("private_seconds", clock.seconds());
    Stopwatch public_clock;
    const auto pub = scg::solve_optimal_public(inst, options);
    run.timing("public_seconds", public_clock.seconds());
    const auto full = scg::full_info_scheme(inst);
    const auto none = scg::no_info_scheme(inst);
    const double full_best = scg::evaluate_public_scheme(inst, full, scg::Selection::kBest, cap);
    const double none_best = scg::evaluate_public_scheme(inst, none, scg::Selection::kBest, cap);

    run.value("private", priv);
    run.value("public_best", pub.value);
    run.value("public_worst",
              scg::evaluate_public_scheme(inst, pub.scheme, scg::Selection::kWorst, cap));
    run.value("full_info_best", full_best);
    run.value("full_info_worst",
              scg::evaluate_public_scheme(inst, full, scg::Selection::kWorst, cap));
    run.value("no_info_best", none_best);
    run.value("no_info_worst",
              scg::evaluate_public_scheme(inst, none, scg::Selection::kWorst, cap));

    const double slack = globals.tolerance;
    const bool chain = priv <= pub.value + slack && pub.value <= std::min(full_best, none_best) + slack;
    run["value_chain"] = chain ? "OK" : "VIOLATION";
    run.note("value chain", chain ? "OK" : "VIOLATION");
    return run.finish(chain ? kOk : kViolation);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal public and private signaling for singleton congestion games"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Globals globals;
  app.add_option("--threads", globals.threads,
                 "Worker threads (default: available parallelism; SCG_SIGNAL_THREADS overrides)");
  app.add_option("--tolerance", globals.tolerance, "Feasibility tolerance")->capture_default_str();
  app.add_option("--max-size", globals.max_size, "Override every enumeration size cap");

  auto* generate = app.add_subcommand("generate", "Write an instance document");
  generate->require_subcommand(1);
  GenerateArgs gen;
  std::string gen_kind;
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", gen.out, "Output path (default: embed in the report)");
  };
  auto* table1 = generate->add_subcommand("table1", "Two-resource, two-state fixture");
  table1->add_option("--prior", gen.prior, "Comma-separated prior, e.g. 0.6,0.4");
  add_out(table1);
  auto* figure1 = generate->add_subcommand("figure1", "Three-resource motivating example");
  figure1->add_option("--n", gen.n, "Agents")->capture_default_str();
  figure1->add_option("--eps", gen.eps, "Fallback surcharge")->capture_default_str();
  figure1->add_option("--wrong-cost", gen.wrong_cost, "Cost of the bad resource")
      ->capture_default_str();
  add_out(figure1);
  auto* hardness = generate->add_subcommand("hardness", "Graph-coloring construction");
  hardness->add_option("--graph", gen.graph, "Edge-list file")->required();
  hardness->add_option("--q", gen.q)->capture_default_str();
  hardness->add_option("--k", gen.k)->capture_default_str();
  hardness->add_option("--eps", gen.hardness_eps)->capture_default_str();
  add_out(hardness);
  auto* random = generate->add_subcommand("random", "Seeded random instance");
  random->add_option("--n", gen.n, "Agents")->capture_default_str();
  random->add_option("--r", gen.r, "Resources")->capture_default_str();
  random->add_option("--states", gen.states)->capture_default_str();
  random->add_option("--seed", gen.seed)->capture_default_str();
  random->add_option("--max-cost", gen.max_cost)->capture_default_str();
  random->add_flag("--asymmetric", gen.asymmetric, "Random non-empty action sets");
  add_out(random);
  for (auto* sub : {table1, figure1, hardness, random}) {
    sub->callback([&gen_kind, sub] { gen_kind = sub->get_name(); });
  }

  auto* solve = app.add_subcommand("solve", "Compute an optimal scheme");
  SolveArgs solve_args;
  solve->add_option("mode", solve_args.mode, "public, private or ce")
      ->required()
      ->check(CLI::IsMember({"public", "private", "ce"}));
  solve->add_option("--in", solve_args.in, "Instance document")->required();
  solve->add_option("--out", solve_args.out, "Scheme output path");
  solve->add_option("--selection", solve_args.selection, "Equilibrium selection for evaluation")
      ->check(CLI::IsMember({"best", "worst"}))
      ->capture_default_str();
  solve->add_flag("--explicit", solve_args.with_explicit,
                  "Also decompose the private scheme into action profiles");

  auto* verify = app.add_subcommand("verify", "Check a scheme against an instance");
  std::string scheme_path, in_path;
  verify->add_option("--scheme", scheme_path)->required();
  verify->add_option("--in", in_path, "Instance document")->required();

  auto* sample = app.add_subcommand("sample", "Draw action profiles from a private scheme");
  std::string state;
  std::uint64_t seed = 1;
  int draws = 10;
  sample->add_option("--scheme", scheme_path)->required();
  sample->add_option("--in", in_path, "Instance document")->required();
  sample->add_option("--state", state, "State name or index")->required();
  sample->add_option("--seed", seed)->capture_default_str();
  sample->add_option("--draws", draws)->capture_default_str();

  auto* compare = app.add_subcommand("compare", "Value table for all schemes and baselines");
  compare->add_option("--in", in_path, "Instance document")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  if (generate->parsed()) return cmd_generate(gen_kind, gen, globals);
  if (solve->parsed()) return cmd_solve(solve_args, globals);
  if (verify->parsed()) return cmd_verify(scheme_path, in_path, globals);
  if (sample->parsed()) return cmd_sample(scheme_path, in_path, state, seed, draws, globals);
  return cmd_compare(in_path, globals);
}
