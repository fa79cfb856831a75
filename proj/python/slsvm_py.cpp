#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "slsvm/cli.hpp"
#include "slsvm/mpcp.hpp"
#include "slsvm/turing_machine.hpp"
#include "slsvm/universal_ga.hpp"
#include "slsvm/universal_swarm.hpp"

namespace py = pybind11;
using namespace slsvm;

namespace {

std::vector<std::string> rendered(const tm::History& h) {
  std::vector<std::string> out;
  for (const auto& c : h.configurations) out.push_back(c.render());
  return out;
}

// Emulations run on the normalized machine; report what the original would.
std::optional<std::vector<std::string>> as_original(const tm::TuringMachine& n, const std::optional<tm::History>& h) {
  if (!h) return std::nullopt;
  return rendered(n.pseudo_blank ? tm::map_symbol(*h, *n.pseudo_blank, n.blank, n.blank) : *h);
}

py::dict result_dict(const tm::TuringMachine& n, uga::Outcome outcome, const std::optional<tm::History>& history,
                     const uga::Stats& stats, const RunTrace& trace) {
  py::dict d;
  d["outcome"] = uga::to_string(outcome);
  d["history"] = as_original(n, history);
  d["generations"] = stats.generations;
  d["attempts_max"] = stats.attempts_max;
  d["peak_len"] = stats.peak_len;
  d["fitness"] = stats.fitness;
  d["trace"] = render_trace(trace);
  return d;
}

uga::Mode parse_mode(const std::string& m) {
  if (m == "det") return uga::Mode::kDeterministic;
  if (m == "stoch") return uga::Mode::kStochastic;
  throw ValidationError("mode must be 'det' or 'stoch'");
}

uga::Variant parse_variant(const std::string& v) {
  if (v == "full") return uga::Variant::kFullHistory;
  if (v == "trimmed") return uga::Variant::kTrimmed;
  throw ValidationError("variant must be 'full' or 'trimmed'");
}

}  // namespace

PYBIND11_MODULE(slsvm, m) {
  m.doc() = "Stochastic local search virtual machine: TM oracle, MPCP compiler, universal GA/ACO/PSO";

  auto base = py::register_exception<Error>(m, "SlsvmError");
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<UnnormalizedMachine>(m, "UnnormalizedMachine", base.ptr());
  py::register_exception<tm::BoundaryViolation>(m, "BoundaryViolation", base.ptr());

  py::class_<tm::TuringMachine>(m, "TuringMachine")
      .def_readonly("states", &tm::TuringMachine::states)
      .def_readonly("input_alphabet", &tm::TuringMachine::input_alphabet)
      .def_readonly("tape_alphabet", &tm::TuringMachine::tape_alphabet)
      .def_readonly("blank", &tm::TuringMachine::blank)
      .def_readonly("start", &tm::TuringMachine::start)
      .def_readonly("finals", &tm::TuringMachine::finals)
      .def_readonly("pseudo_blank", &tm::TuringMachine::pseudo_blank)
      .def_property_readonly("rule_count", [](const tm::TuringMachine& t) { return t.delta.size(); })
      .def("__str__", &tm::render_tm);

  m.def("parse_tm", [](const std::string& text) { return tm::parse_tm(text); }, py::arg("text"));
  m.def("load_tm", &tm::load_tm, py::arg("path"));
  m.def("normalize", &tm::normalize, py::arg("machine"));

  m.def(
      "simulate",
      [](const tm::TuringMachine& t, const std::string& input, std::size_t max_steps) {
        auto h = tm::simulate(t, tm::tokenize_input(t, input), max_steps);
        return py::make_tuple(rendered(h), tm::to_string(h.status));
      },
      py::arg("machine"), py::arg("input"), py::arg("max_steps") = 10000,
      "Returns (configurations, status); each configuration rendered as 'alpha q beta'.");

  m.def(
      "compile",
      [](const tm::TuringMachine& t, const std::string& input) {
        const auto n = t.pseudo_blank ? t : tm::normalize(t);
        const auto set = mpcp::compile(n, tm::tokenize_input(n, input));
        std::vector<std::pair<std::string, std::string>> tiles;
        for (const auto& tile : set.tiles) tiles.emplace_back(set.spell(tile.top), set.spell(tile.bottom));
        return tiles;
      },
      py::arg("machine"), py::arg("input"), "Normalizes if needed; returns the (top, bottom) pairs in order.");

  m.def(
      "run_ga",
      [](const tm::TuringMachine& t, const std::string& input, std::size_t generations, const std::string& mode,
         const std::string& variant, std::uint64_t seed) {
        const auto n = tm::normalize(t);
        uga::RunOptions opt;
        opt.seed = seed;
        auto r = uga::run_universal(n, tm::tokenize_input(n, input), parse_mode(mode), parse_variant(variant),
                                    generations, opt);
        py::dict d = result_dict(n, r.outcome, r.history, r.stats, r.trace);
        d["final_config"] = r.final_config ? py::cast(r.final_config->render()) : py::none();
        d["tile_count"] = r.tiles->count;
        return d;
      },
      py::arg("machine"), py::arg("input"), py::arg("generations"), py::arg("mode") = "det",
      py::arg("variant") = "full", py::arg("seed") = 0);

  m.def(
      "run_aco",
      [](const tm::TuringMachine& t, const std::string& input, std::size_t iterations, std::size_t ants,
         std::uint64_t seed, bool blacklist) {
        const auto n = tm::normalize(t);
        swarm::AcoOptions opt;
        opt.ants = ants;
        opt.seed = seed;
        opt.blacklist = blacklist;
        auto r = swarm::aco_run_universal(n, tm::tokenize_input(n, input), iterations, opt);
        py::dict d = result_dict(n, r.outcome, r.history, r.stats, r.trace);
        d["tree"] = r.extra_stats;
        return d;
      },
      py::arg("machine"), py::arg("input"), py::arg("iterations"), py::arg("ants") = 4, py::arg("seed") = 0,
      py::arg("blacklist") = true);

  m.def(
      "run_pso",
      [](const tm::TuringMachine& t, const std::string& input, std::size_t iterations, std::size_t particles,
         std::uint64_t seed, bool blacklist) {
        const auto n = tm::normalize(t);
        swarm::PsoOptions opt;
        opt.particles = particles;
        opt.seed = seed;
        opt.blacklist = blacklist;
        auto r = swarm::pso_run_universal(n, tm::tokenize_input(n, input), iterations, opt);
        return result_dict(n, r.outcome, r.history, r.stats, r.trace);
      },
      py::arg("machine"), py::arg("input"), py::arg("iterations"), py::arg("particles") = 4, py::arg("seed") = 0,
      py::arg("blacklist") = true);

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs one slsvm command line in-process; returns (exit_code, stdout, stderr).");
}
