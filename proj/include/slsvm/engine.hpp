#pragma once

// General-form SLS interpreter: a small-step transition system over
// configurations <S, s> and terminal states s, parameterized by a
// FunctionSuite that supplies every problem- and heuristic-specific piece.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "slsvm/errors.hpp"
#include "slsvm/rng.hpp"
#include "slsvm/statement.hpp"
#include "slsvm/trace.hpp"

namespace slsvm {

// Payload types for one instantiation. The engine never looks inside them.
template <class T>
concept SuiteTraits = requires {
  typename T::Pexp;
  typename T::Algorithm;
  typename T::Problem;
  typename T::Solutions;
  typename T::Solution;
  typename T::Fpw;
  typename T::Extra;
};

// (Prob, Sols, Best, FPW, Extra). Every variable starts Absent; reading an
// Absent variable throws AbsentField.
template <SuiteTraits T>
class State {
 public:
  using Problem = typename T::Problem;
  using Solutions = typename T::Solutions;
  using Solution = typename T::Solution;
  using Fpw = typename T::Fpw;
  using Extra = typename T::Extra;

  bool has_prob() const noexcept { return prob_.has_value(); }
  bool has_sols() const noexcept { return sols_.has_value(); }
  bool has_best() const noexcept { return best_.has_value(); }
  bool has_fpw() const noexcept { return fpw_.has_value(); }
  bool has_extra() const noexcept { return extra_.has_value(); }

  const Problem& prob() const { return require(prob_, "Prob"); }
  const Solutions& sols() const { return require(sols_, "Sols"); }
  const Solution& best() const { return require(best_, "Best"); }
  const Fpw& fpw() const { return require(fpw_, "FPW"); }
  const Extra& extra() const { return require(extra_, "Extra"); }

  // In-place substitution, used on states the caller owns.
  State& set_prob(Problem v) { prob_ = std::move(v); return *this; }
  State& set_sols(Solutions v) { sols_ = std::move(v); return *this; }
  State& set_best(Solution v) { best_ = std::move(v); return *this; }
  State& set_fpw(Fpw v) { fpw_ = std::move(v); return *this; }
  State& set_extra(Extra v) { extra_ = std::move(v); return *this; }

  // s[A -> b]: a new state equal to this one except at A.
  State with_prob(Problem v) const { State s = *this; return std::move(s.set_prob(std::move(v))); }
  State with_sols(Solutions v) const { State s = *this; return std::move(s.set_sols(std::move(v))); }
  State with_best(Solution v) const { State s = *this; return std::move(s.set_best(std::move(v))); }
  State with_fpw(Fpw v) const { State s = *this; return std::move(s.set_fpw(std::move(v))); }
  State with_extra(Extra v) const { State s = *this; return std::move(s.set_extra(std::move(v))); }

 private:
  template <class V>
  static const V& require(const std::optional<V>& slot, const char* name) {
    if (!slot) throw AbsentField(std::string("read of absent state variable ") + name);
    return *slot;
  }

  std::optional<Problem> prob_;
  std::optional<Solutions> sols_;
  std::optional<Solution> best_;
  std::optional<Fpw> fpw_;
  std::optional<Extra> extra_;
};

template <SuiteTraits T>
using SolsFn = std::function<std::pair<typename T::Solutions, typename T::Extra>(const State<T>&, Rng&)>;
template <SuiteTraits T>
using FpwFn = std::function<std::pair<typename T::Fpw, typename T::Extra>(const State<T>&, Rng&)>;
template <SuiteTraits T>
using BestFn = std::function<std::pair<typename T::Solution, typename T::Extra>(const State<T>&, Rng&)>;

// A statement an instance adds to the grammar, with the rule that executes
// it. Solution-set rules (select, cross, mutate, divert, aim, move) replace
// Sols; FPW rules (simulate) replace FPW.
template <SuiteTraits T>
struct InstanceRule {
  std::string rule_name;
  std::variant<SolsFn<T>, FpwFn<T>> fn;
};

template <SuiteTraits T>
struct FunctionSuite {
  std::function<typename T::Extra(const typename T::Algorithm&)> init;
  std::function<std::pair<typename T::Problem, typename T::Extra>(const typename T::Pexp&, const State<T>&, Rng&)>
      set_problem;
  SolsFn<T> generate;
  SolsFn<T> next;  // consulted only when next_gen_expansion is empty
  FpwFn<T> aeval;
  BestFn<T> beval;
  std::function<bool(const State<T>&)> stop;

  std::map<std::string, InstanceRule<T>> instance_rules;
  // nextGen rewrites to this statement (GA: select; cross; mutate).
  std::optional<Statement> next_gen_expansion;
  // Instance statement evaluated as the premise of [evaluate] in place of
  // aeval (ACO: simulate).
  std::optional<std::string> evaluate_premise;

  // Renders the digest column of the trace; defaults to the integer FPW.
  std::function<std::string(const State<T>&)> digest;
};

template <SuiteTraits T>
class Configuration {
 public:
  static Configuration running(Statement stmt, State<T> state) {
    return Configuration(std::move(stmt), std::move(state));
  }
  static Configuration terminal(State<T> state) { return Configuration(std::nullopt, std::move(state)); }

  bool is_terminal() const noexcept { return !statement_.has_value(); }
  const Statement& statement() const {
    if (!statement_) throw PreconditionViolation("terminal configuration has no statement");
    return *statement_;
  }
  const State<T>& state() const& noexcept { return state_; }
  State<T>&& state() && noexcept { return std::move(state_); }

 private:
  Configuration(std::optional<Statement> stmt, State<T> state)
      : statement_(std::move(stmt)), state_(std::move(state)) {}

  std::optional<Statement> statement_;
  State<T> state_;
};

template <SuiteTraits T>
struct Transition {
  Configuration<T> next;
  std::string rule;  // rule at the root of the derivation, e.g. "comp2"
  std::vector<RuleApplication> applications;
};

template <SuiteTraits T>
struct RunResult {
  bool terminated = false;  // false: the rule budget ran out first
  State<T> state;
  RunTrace trace;
  std::size_t steps = 0;
};

// Called once per transition with the rules it applied and the
// resulting state.
template <SuiteTraits T>
using StepObserver = std::function<void(const std::vector<RuleApplication>&, const State<T>&)>;

template <SuiteTraits T>
std::string default_digest(const State<T>& s) {
  if constexpr (std::is_integral_v<typename T::Fpw>) {
    if (s.has_fpw()) return std::to_string(s.fpw());
  }
  return "-";
}

template <SuiteTraits T>
class Interpreter {
 public:
  Interpreter(const FunctionSuite<T>& suite, typename T::Pexp pexp, typename T::Algorithm algorithm)
      : suite_(suite), pexp_(std::move(pexp)), algorithm_(std::move(algorithm)) {}

  Transition<T> step(Configuration<T> config, Rng& rng) const {
    if (config.is_terminal()) throw PreconditionViolation("step on a terminal configuration");
    Statement stmt = config.statement();
    std::vector<RuleApplication> apps;
    Outcome out = exec(stmt, std::move(config).state(), rng, apps);
    Configuration<T> next = out.rest ? Configuration<T>::running(std::move(*out.rest), std::move(out.state))
                                     : Configuration<T>::terminal(std::move(out.state));
    return Transition<T>{std::move(next), std::move(out.rule), std::move(apps)};
  }

  RunResult<T> run(Rng& rng, std::size_t budget, const StepObserver<T>& observer = {}) const {
    if (budget == 0) throw PreconditionViolation("rule budget must be at least 1");
    RunResult<T> result;
    Configuration<T> config = Configuration<T>::running(Statement::compute(), State<T>{});
    while (!config.is_terminal() && result.trace.size() < budget) {
      Transition<T> t = step(std::move(config), rng);
      config = std::move(t.next);
      ++result.steps;
      if (observer) observer(t.applications, config.state());
      for (auto& app : t.applications) result.trace.push_back(std::move(app));
    }
    result.terminated = config.is_terminal();
    result.state = std::move(config).state();
    return result;
  }

 private:
  struct Outcome {
    std::optional<Statement> rest;  // empty: the statement ran to a terminal state
    State<T> state;
    std::string rule;
  };

  std::string digest(const State<T>& s) const { return suite_.digest ? suite_.digest(s) : default_digest(s); }

  std::size_t open(std::vector<RuleApplication>& apps, std::string rule, const Statement& stmt) const {
    apps.push_back(RuleApplication{std::move(rule), stmt.head(), "-"});
    return apps.size() - 1;
  }

  template <class Fn>
  static const Fn& need(const Fn& fn, const char* what) {
    if (!fn) throw NoRuleApplies(std::string("suite provides no ") + what);
    return fn;
  }

  Outcome exec(const Statement& stmt, State<T> s, Rng& rng, std::vector<RuleApplication>& apps) const {
    using K = Statement::Kind;
    switch (stmt.kind()) {
      case K::kSeq: {
        Outcome inner = exec(stmt.first(), std::move(s), rng, apps);
        if (inner.rest) {
          return {Statement::seq(std::move(*inner.rest), stmt.second()), std::move(inner.state), "comp1"};
        }
        return {stmt.second(), std::move(inner.state), "comp2"};
      }
      case K::kCompute: {
        // <compute(p), s> => <generate; evaluate; stop, s'>
        //   if <setProb(p), s[Extra -> C[A]]> => s'
        std::size_t at = open(apps, "compute", stmt);
        s.set_extra(need(suite_.init, "init")(algorithm_));
        Outcome premise = exec(Statement::set_prob(), std::move(s), rng, apps);
        apps[at].digest = digest(premise.state);
        return {Statement::chain({Statement::generate(), Statement::evaluate(), Statement::stop()}),
                std::move(premise.state), "compute"};
      }
      case K::kSetProb: {
        std::size_t at = open(apps, "set-problem", stmt);
        auto [prob, extra] = need(suite_.set_problem, "setProb function")(pexp_, s, rng);
        s.set_prob(std::move(prob)).set_extra(std::move(extra));
        apps[at].digest = digest(s);
        return {std::nullopt, std::move(s), "set-problem"};
      }
      case K::kGenerate: {
        std::size_t at = open(apps, "generate", stmt);
        auto [sols, extra] = need(suite_.generate, "generate function")(s, rng);
        s.set_sols(std::move(sols)).set_extra(std::move(extra));
        apps[at].digest = digest(s);
        return {std::nullopt, std::move(s), "generate"};
      }
      case K::kNextGen: {
        std::size_t at = open(apps, "next-generation", stmt);
        if (suite_.next_gen_expansion) {
          apps[at].digest = digest(s);
          return {*suite_.next_gen_expansion, std::move(s), "next-generation"};
        }
        auto [sols, extra] = need(suite_.next, "next function")(s, rng);
        s.set_sols(std::move(sols)).set_extra(std::move(extra));
        apps[at].digest = digest(s);
        return {std::nullopt, std::move(s), "next-generation"};
      }
      case K::kEvaluate: {
        // aeval lands first; beval observes the state carrying the new FPW.
        std::size_t at = open(apps, "evaluate", stmt);
        if (suite_.evaluate_premise) {
          Outcome premise = exec(Statement::instance(*suite_.evaluate_premise), std::move(s), rng, apps);
          s = std::move(premise.state);
        } else {
          auto [fpw, extra] = need(suite_.aeval, "aeval function")(s, rng);
          s.set_fpw(std::move(fpw)).set_extra(std::move(extra));
        }
        auto [best, extra] = need(suite_.beval, "beval function")(s, rng);
        s.set_best(std::move(best)).set_extra(std::move(extra));
        apps[at].digest = digest(s);
        return {std::nullopt, std::move(s), "evaluate"};
      }
      case K::kStop: {
        if (need(suite_.stop, "stop criterion")(s)) {
          std::size_t at = open(apps, "stop^tt", stmt);
          apps[at].digest = digest(s);
          return {std::nullopt, std::move(s), "stop^tt"};
        }
        std::size_t at = open(apps, "stop^ff", stmt);
        apps[at].digest = digest(s);
        return {Statement::chain({Statement::next_gen(), Statement::evaluate(), Statement::stop()}), std::move(s),
                "stop^ff"};
      }
      case K::kInstance: {
        auto it = suite_.instance_rules.find(stmt.name());
        if (it == suite_.instance_rules.end()) {
          throw NoRuleApplies("no rule registered for statement '" + stmt.name() + "'");
        }
        const InstanceRule<T>& rule = it->second;
        std::size_t at = open(apps, rule.rule_name, stmt);
        if (const auto* sols_fn = std::get_if<SolsFn<T>>(&rule.fn)) {
          auto [sols, extra] = need(*sols_fn, "instance function")(s, rng);
          s.set_sols(std::move(sols)).set_extra(std::move(extra));
        } else {
          auto [fpw, extra] = need(std::get<FpwFn<T>>(rule.fn), "instance function")(s, rng);
          s.set_fpw(std::move(fpw)).set_extra(std::move(extra));
        }
        apps[at].digest = digest(s);
        return {std::nullopt, std::move(s), rule.rule_name};
      }
    }
    throw NoRuleApplies("unknown statement kind");
  }

  const FunctionSuite<T>& suite_;
  typename T::Pexp pexp_;
  typename T::Algorithm algorithm_;
};

// Runs <compute(p), s0> from the all-Absent state until a terminal state or
// until `budget` rule applications have been recorded.
template <SuiteTraits T>
RunResult<T> compute(const typename T::Pexp& pexp, const typename T::Algorithm& algorithm,
                     const FunctionSuite<T>& suite, Rng& rng, std::size_t budget,
                     const StepObserver<T>& observer = {}) {
  return Interpreter<T>(suite, pexp, algorithm).run(rng, budget, observer);
}

}  // namespace slsvm
