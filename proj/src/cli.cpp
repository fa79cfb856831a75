#include "slsvm/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "slsvm/heuristics.hpp"
#include "slsvm/mpcp.hpp"
#include "slsvm/turing_machine.hpp"
#include "slsvm/universal_ga.hpp"
#include "slsvm/universal_swarm.hpp"

namespace slsvm::cli {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct EmulateArgs {
  std::string heuristic = "ga";
  std::string tm_file;
  std::string input;
  std::string mode = "stoch";
  std::string variant = "full";
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  std::size_t ants = 4;
  std::size_t particles = 4;
  bool no_blacklist = false;
  std::optional<std::size_t> corrupt_tile;
};

struct Emulation {
  uga::Outcome outcome = uga::Outcome::kBudgetExhausted;
  std::optional<tm::History> history;
  std::optional<tm::Configuration> final_config;
  std::vector<std::string> stats;
};

struct Loaded {
  tm::TuringMachine raw;
  tm::TuringMachine normalized;
  std::vector<tm::Symbol> input;
};

Loaded load(const std::string& path, const std::string& input) {
  Loaded l;
  l.raw = tm::load_tm(path);
  l.normalized = tm::normalize(l.raw);
  l.input = tm::tokenize_input(l.raw, input);
  return l;
}

// Emulates on the normalized machine and maps the pseudo-blank back, so the
// output reads exactly like the oracle's.
Emulation emulate(const Loaded& m, const EmulateArgs& a) {
  std::function<void(mpcp::TileSet&)> tamper;
  if (a.corrupt_tile) {
    const std::size_t i = *a.corrupt_tile;
    const std::size_t n = mpcp::compile(m.normalized, m.input).count;
    if (i >= n) throw ValidationError("--corrupt-tile " + std::to_string(i) + " out of range (" + std::to_string(n) + " tiles)");
    tamper = [i](mpcp::TileSet& set) {
      auto& b = set.tiles[i].bottom;
      b.insert(b.begin(), b.front());
    };
  }
  Emulation e;
  const bool blacklist = !a.no_blacklist;
  if (a.heuristic == "ga") {
    uga::RunOptions opt;
    opt.seed = a.seed;
    opt.tamper = tamper;
    const auto mode = a.mode == "det" ? uga::Mode::kDeterministic : uga::Mode::kStochastic;
    const auto variant = a.variant == "trimmed" ? uga::Variant::kTrimmed : uga::Variant::kFullHistory;
    auto r = uga::run_universal(m.normalized, m.input, mode, variant, a.budget, opt);
    e.outcome = r.outcome;
    e.history = std::move(r.history);
    e.final_config = std::move(r.final_config);
    e.stats.push_back(r.stats.line());
  } else if (a.heuristic == "aco") {
    swarm::AcoOptions opt;
    opt.ants = a.ants;
    opt.blacklist = blacklist;
    opt.seed = a.seed;
    opt.tamper = tamper;
    auto r = swarm::aco_run_universal(m.normalized, m.input, a.budget, opt);
    e.outcome = r.outcome;
    e.history = std::move(r.history);
    e.stats.push_back(r.stats.line());
    e.stats.push_back(r.extra_stats);
  } else {
    swarm::PsoOptions opt;
    opt.particles = a.particles;
    opt.blacklist = blacklist;
    opt.seed = a.seed;
    opt.tamper = tamper;
    auto r = swarm::pso_run_universal(m.normalized, m.input, a.budget, opt);
    e.outcome = r.outcome;
    e.history = std::move(r.history);
    e.stats.push_back(r.stats.line());
  }
  if (m.normalized.pseudo_blank) {
    const auto& hat = *m.normalized.pseudo_blank;
    const auto& blank = m.normalized.blank;
    if (e.history) e.history = tm::map_symbol(*e.history, hat, blank, blank);
    if (e.final_config) {
      e.final_config = tm::map_symbol(tm::History{{*e.final_config}, {}}, hat, blank, blank).configurations.front();
    }
  }
  if (e.history && !e.final_config) e.final_config = e.history->configurations.back();
  return e;
}

int exit_for(uga::Outcome o) {
  switch (o) {
    case uga::Outcome::kAccepted: return kOk;
    case uga::Outcome::kBudgetExhausted: return kBudgetExhausted;
    case uga::Outcome::kStuck: return kStuck;
  }
  return kInvalidInput;
}

int exit_for(tm::HaltStatus s) {
  switch (s) {
    case tm::HaltStatus::kAccepted: return kOk;
    case tm::HaltStatus::kBudgetExhausted: return kBudgetExhausted;
    case tm::HaltStatus::kStuck: return kStuck;
  }
  return kInvalidInput;
}

uga::Outcome as_outcome(tm::HaltStatus s) {
  switch (s) {
    case tm::HaltStatus::kAccepted: return uga::Outcome::kAccepted;
    case tm::HaltStatus::kStuck: return uga::Outcome::kStuck;
    case tm::HaltStatus::kBudgetExhausted: break;
  }
  return uga::Outcome::kBudgetExhausted;
}

int cmd_compile(const std::string& file, const std::string& input, std::ostream& out, std::ostream& err) {
  const Loaded m = load(file, input);
  const auto set = mpcp::compile(m.normalized, m.input);
  if (m.raw.finals.empty()) err << "warning: machine has no final states; the tile set has no closing tiles\n";
  out << mpcp::render_tiles(set);
  return kOk;
}

int cmd_simulate(const std::string& file, const std::string& input, std::size_t max_steps, std::ostream& out,
                 std::ostream& err) {
  const Loaded m = load(file, input);
  try {
    const auto h = tm::simulate(m.raw, m.input, max_steps);
    out << tm::render_history(h);
    return exit_for(h.status);
  } catch (const tm::BoundaryViolation& e) {
    out << tm::render_history(e.partial());
    err << "error: " << e.what() << "\n";
    return kBoundaryViolation;
  }
}

int cmd_emulate(const EmulateArgs& a, std::ostream& out, std::ostream& err) {
  const Loaded m = load(a.tm_file, a.input);
  const Emulation e = emulate(m, a);
  if (e.history) {
    out << tm::render_history(*e.history);
  } else if (e.final_config) {
    out << e.final_config->render() << "\n";
    out << "# final configuration only (trimmed variant)\n";
  }
  out << "# outcome=" << uga::to_string(e.outcome) << "\n";
  for (const auto& s : e.stats) out << "# " << s << "\n";
  if (e.outcome == uga::Outcome::kStuck) err << "emulation stuck: no tile extends the partial solution\n";
  return exit_for(e.outcome);
}

int cmd_verify(const EmulateArgs& a, std::size_t max_steps, std::ostream& out) {
  const Loaded m = load(a.tm_file, a.input);
  tm::History oracle;
  try {
    oracle = tm::simulate(m.raw, m.input, max_steps);
  } catch (const tm::BoundaryViolation& e) {
    out << "BOUNDARY-VIOLATION " << e.what() << "\n";
    return kBoundaryViolation;
  }
  Emulation e;
  try {
    e = emulate(m, a);
  } catch (const MalformedSegment& ex) {
    out << "DIVERGE decode: " << ex.what() << "\n";
    return kMismatch;
  }
  const auto expected = as_outcome(oracle.status);
  if (expected == uga::Outcome::kAccepted && e.outcome == uga::Outcome::kAccepted) {
    std::vector<tm::Configuration> got;
    std::vector<tm::Configuration> want;
    if (e.history) {
      got = e.history->configurations;
      want = oracle.configurations;
    } else {
      got = {*e.final_config};
      want = {oracle.configurations.back()};
    }
    const std::size_t n = std::max(got.size(), want.size());
    for (std::size_t i = 0; i < n; ++i) {
      const std::string w = i < want.size() ? want[i].render() : "<none>";
      const std::string g = i < got.size() ? got[i].render() : "<none>";
      if (w != g) {
        out << "DIVERGE line " << i + 1 << ": oracle '" << w << "' emulation '" << g << "'\n";
        return kMismatch;
      }
    }
    out << "MATCH\n";
    return kOk;
  }
  if (expected == uga::Outcome::kBudgetExhausted && e.outcome == uga::Outcome::kBudgetExhausted) {
    out << "BOTH-NONHALTING\n";
    return kOk;
  }
  if (expected == uga::Outcome::kStuck && e.outcome == uga::Outcome::kStuck) {
    out << "BOTH-STUCK\n";
    return kOk;
  }
  if (expected == uga::Outcome::kAccepted && e.outcome == uga::Outcome::kBudgetExhausted) {
    out << "EMULATION-BUDGET-EXHAUSTED oracle accepted after " << oracle.configurations.size() - 1 << " steps\n";
    return kBudgetExhausted;
  }
  out << "DIVERGE verdict: oracle " << tm::to_string(oracle.status) << " emulation " << uga::to_string(e.outcome)
      << "\n";
  return kMismatch;
}

demo::Graph read_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read graph file '" + path + "'");
  demo::Graph g;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string key;
    if (!(fields >> key)) continue;
    if (key == "nodes") {
      if (!(fields >> g.nodes)) throw ParseError(line_no, "expected 'nodes <count>'");
    } else if (key == "edge") {
      demo::Edge e{};
      if (!(fields >> e.from >> e.to >> e.cost)) throw ParseError(line_no, "expected 'edge <from> <to> <cost>'");
      g.edges.push_back(e);
    } else {
      throw ParseError(line_no, "unknown key '" + key + "'");
    }
  }
  return g;
}

// 3x3 grid, edges rightward and downward, fixed pseudo-random costs.
demo::Graph default_grid() {
  demo::Graph g;
  g.nodes = 9;
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      const std::size_t u = r * 3 + c;
      auto cost = [u](std::size_t v) { return static_cast<double>(1 + (u * 5 + v * 3) % 9); };
      if (c + 1 < 3) g.edges.push_back({u, u + 1, cost(u + 1)});
      if (r + 1 < 3) g.edges.push_back({u, u + 3, cost(u + 3)});
    }
  }
  return g;
}

struct DemoArgs {
  std::string problem;
  std::uint64_t seed = 0;
  bool trace = false;
  std::size_t n = 8, pop = 20, generations = 200;
  std::optional<double> mut_rate;
  std::size_t ants = 10;
  std::optional<std::size_t> iterations;  // defaults: gridpath 50, sphere 100
  std::string graph;
  std::size_t dim = 2, particles = 10;
};

int cmd_demo(const DemoArgs& a, std::ostream& out) {
  Rng rng(a.seed);
  RunTrace trace;
  auto emit = [&](const std::string& line) {
    if (!a.trace) out << line << "\n";
  };
  if (a.problem == "onemax") {
    demo::OneMaxParams p;
    p.n = a.n;
    p.pop = a.pop;
    p.mut_rate = a.mut_rate;
    p.max_generations = a.generations;
    const auto suite = demo::onemax_ga_suite(p);
    auto r = compute<demo::OneMaxTraits>(a.n, p, suite, rng, static_cast<std::size_t>(-1),
                                         [&](const std::vector<RuleApplication>& apps, const auto& s) {
                                           for (const auto& app : apps) {
                                             if (app.rule == "evaluate") {
                                               emit("generation=" + std::to_string(s.extra().generation) +
                                                    " best=" + std::to_string(s.fpw()));
                                             }
                                           }
                                         });
    trace = std::move(r.trace);
    emit("final fitness=" + std::to_string(r.state.fpw()) + " generations=" + std::to_string(r.state.extra().generation));
  } else if (a.problem == "gridpath") {
    demo::GridPathParams p{a.ants, a.iterations.value_or(50)};
    const auto graph = a.graph.empty() ? default_grid() : read_graph(a.graph);
    const auto suite = demo::gridpath_aco_suite(p);
    auto r = compute<demo::GridPathTraits>(graph, p, suite, rng, static_cast<std::size_t>(-1),
                                           [&](const std::vector<RuleApplication>& apps, const auto& s) {
                                             for (const auto& app : apps) {
                                               if (app.rule == "evaluate") {
                                                 emit("iteration=" + std::to_string(s.extra().iteration) +
                                                      " best_cost=" + num(demo::path_cost(s.prob(), s.best())));
                                               }
                                             }
                                           });
    trace = std::move(r.trace);
    std::string path = std::to_string(r.state.prob().source);
    for (auto e : r.state.best()) path += "-" + std::to_string(r.state.prob().graph.edges[e].to);
    emit("final cost=" + num(demo::path_cost(r.state.prob(), r.state.best())) + " path=" + path +
         " iterations=" + std::to_string(r.state.extra().iteration));
  } else {
    demo::SphereParams p;
    p.dim = a.dim;
    p.particles = a.particles;
    p.max_iterations = a.iterations.value_or(100);
    const auto suite = demo::sphere_pso_suite(p);
    auto r = compute<demo::SphereTraits>(a.dim, p, suite, rng, static_cast<std::size_t>(-1),
                                         [&](const std::vector<RuleApplication>& apps, const auto& s) {
                                           for (const auto& app : apps) {
                                             if (app.rule == "evaluate") {
                                               emit("iteration=" + std::to_string(s.extra().iteration) +
                                                    " best=" + num(demo::sphere(s.best().x)));
                                             }
                                           }
                                         });
    trace = std::move(r.trace);
    emit("final best=" + num(demo::sphere(r.state.best().x)) +
         " iterations=" + std::to_string(r.state.extra().iteration));
  }
  if (a.trace) out << render_trace(trace);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic local search virtual machine", "slsvm"};
  app.require_subcommand(1);

  std::string tm_file, input;
  std::size_t max_steps = 10000;

  auto* compile = app.add_subcommand("compile", "Compile a machine and input into its MPCP tile set");
  compile->add_option("tm-file", tm_file, "Machine description")->required();
  compile->add_option("input", input, "Input word");

  auto* simulate = app.add_subcommand("simulate", "Run the machine directly and print its history");
  simulate->add_option("tm-file", tm_file, "Machine description")->required();
  simulate->add_option("input", input, "Input word");
  simulate->add_option("--max-steps", max_steps, "Transition budget");

  EmulateArgs ea;
  auto add_emulation = [&](CLI::App* cmd) {
    cmd->add_option("heuristic", ea.heuristic, "ga, aco or pso")->required()->check(CLI::IsMember({"ga", "aco", "pso"}));
    cmd->add_option("tm-file", ea.tm_file, "Machine description")->required();
    cmd->add_option("input", ea.input, "Input word");
    cmd->add_option("--mode", ea.mode, "GA draw order: stoch or det")->check(CLI::IsMember({"stoch", "det"}));
    cmd->add_option("--variant", ea.variant, "GA memory variant: full or trimmed")
        ->check(CLI::IsMember({"full", "trimmed"}));
    cmd->add_option("--seed", ea.seed, "Random seed");
    cmd->add_option("--ants", ea.ants, "ACO ants per iteration")->check(CLI::PositiveNumber);
    cmd->add_option("--particles", ea.particles, "PSO particles")->check(CLI::PositiveNumber);
    cmd->add_flag("--no-blacklist", ea.no_blacklist, "ACO/PSO: do not rule out rejected tiles");
  };
  auto* emulate_cmd = app.add_subcommand("emulate", "Run a universal heuristic on the machine");
  add_emulation(emulate_cmd);
  emulate_cmd->add_option("--budget", ea.budget, "Generations (GA, PSO) or iterations (ACO)")->required();

  auto* verify = app.add_subcommand("verify", "Compare an emulation against the direct simulation");
  add_emulation(verify);
  ea.budget = 100000;
  std::optional<std::size_t> verify_max_steps;
  verify->add_option("--budget", ea.budget, "Generations (GA, PSO) or iterations (ACO)");
  verify->add_option("--max-steps", verify_max_steps, "Oracle transition budget (defaults to --budget)");
  verify->add_option("--corrupt-tile", ea.corrupt_tile, "Negative control: damage tile <i> before the run");

  DemoArgs da;
  auto* demo_cmd = app.add_subcommand("demo", "Run a demonstration problem");
  demo_cmd->add_option("problem", da.problem, "onemax, gridpath or sphere")
      ->required()
      ->check(CLI::IsMember({"onemax", "gridpath", "sphere"}));
  demo_cmd->add_option("--seed", da.seed, "Random seed");
  demo_cmd->add_flag("--trace", da.trace, "Print the rule trace instead of the progress lines");
  demo_cmd->add_option("--n", da.n, "onemax: bit length");
  demo_cmd->add_option("--pop", da.pop, "onemax: population size");
  demo_cmd->add_option("--mut-rate", da.mut_rate, "onemax: per-bit mutation probability");
  demo_cmd->add_option("--generations", da.generations, "onemax: generation cap");
  demo_cmd->add_option("--ants", da.ants, "gridpath: ants per iteration");
  demo_cmd->add_option("--iterations", da.iterations, "gridpath, sphere: iteration cap");
  demo_cmd->add_option("--graph", da.graph, "gridpath: graph file ('nodes N' / 'edge u v cost' lines)");
  demo_cmd->add_option("--dim", da.dim, "sphere: dimension");
  demo_cmd->add_option("--particles", da.particles, "sphere: swarm size");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (*compile) return cmd_compile(tm_file, input, out, err);
    if (*simulate) return cmd_simulate(tm_file, input, max_steps, out, err);
    if (*emulate_cmd) return cmd_emulate(ea, out, err);
    if (*verify) return cmd_verify(ea, verify_max_steps.value_or(ea.budget), out);
    return cmd_demo(da, out);
  } catch (const tm::BoundaryViolation& e) {
    err << "error: " << e.what() << "\n";
    return kBoundaryViolation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
}

}  // namespace slsvm::cli
