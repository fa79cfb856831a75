#include "slsvm/universal_swarm.hpp"

#include <algorithm>

namespace slsvm::swarm {

TileTree TileTree::fresh(const mpcp::TileSet& set) {
  if (set.count < 2) throw PreconditionViolation("tile tree needs at least two tiles");
  TileTree t;
  t.fanout_ = set.count - 1;
  t.add(0, 0);
  t.first_child_[0] = 1;
  t.flags_[0] = kLegal;
  t.add(0, 0);
  return t;
}

std::uint32_t TileTree::add(std::uint32_t parent, mpcp::TileIndex tile) {
  const auto id = static_cast<std::uint32_t>(parent_.size());
  parent_.push_back(parent);
  tile_.push_back(tile);
  depth_.push_back(id == 0 ? 0 : depth_[parent] + 1);
  first_child_.push_back(0);
  pheromone_.push_back(0.0);
  flags_.push_back(0);
  remainder_.push_back(id == 0 ? std::make_shared<const mpcp::Word>() : nullptr);
  return id;
}

std::pair<std::uint32_t, std::uint32_t> TileTree::children(std::uint32_t v) const {
  const std::uint32_t f = first_child_.at(v);
  if (f == 0) return {0, 0};
  if (v == 0) return {1, 2};
  return {f, f + static_cast<std::uint32_t>(fanout_)};
}

mpcp::TileSeq TileTree::path(std::uint32_t v) const {
  mpcp::TileSeq seq;
  for (; v != 0; v = parent_[v]) seq.push_back(tile_[v]);
  std::reverse(seq.begin(), seq.end());
  return seq;
}

void TileTree::expand(std::uint32_t v, std::size_t tile_count) {
  const auto first = static_cast<std::uint32_t>(parent_.size());
  for (std::size_t i = 1; i < tile_count; ++i) add(v, static_cast<mpcp::TileIndex>(i));
  first_child_[v] = first;
}

void TileTree::block(std::uint32_t v) {
  while (true) {
    flags_[v] |= kBlocked;
    if (v == 0) return;
    const std::uint32_t p = parent_[v];
    auto [f, l] = children(p);
    for (std::uint32_t c = f; c < l; ++c) {
      if (!blocked(c)) return;
    }
    v = p;
  }
}

std::uint32_t TileTree::walk(Rng& rng) const {
  std::uint32_t v = 0;
  std::vector<std::uint32_t> open;
  while (true) {
    auto [f, l] = children(v);
    if (f == l) return v;
    open.clear();
    double total = 0.0;
    double min_positive = 0.0;
    for (std::uint32_t c = f; c < l; ++c) {
      if (blocked(c)) continue;
      open.push_back(c);
      const double p = pheromone_[c];
      total += p;
      if (p > 0 && (min_positive == 0.0 || p < min_positive)) min_positive = p;
    }
    if (open.empty()) return v;
    if (total == 0.0) {
      v = open[rng.uniform_index(open.size())];
      continue;
    }
    // Unreinforced edges keep a small positive chance.
    const double floor = min_positive / static_cast<double>(fanout_ + 1);
    double sum = 0.0;
    for (auto c : open) sum += pheromone_[c] > 0 ? pheromone_[c] : floor;
    double pick = rng.uniform01() * sum;
    v = open.back();
    for (auto c : open) {
      pick -= pheromone_[c] > 0 ? pheromone_[c] : floor;
      if (pick < 0) {
        v = c;
        break;
      }
    }
  }
}

void TileTree::settle(const mpcp::TileSet& set, std::uint32_t leaf, bool blacklist) {
  if (leaf == 0 || blocked(leaf)) return;
  if (!legal(leaf)) {
    auto r = mpcp::advance(*remainder_[parent_[leaf]], set[tile_[leaf]]);
    if (!r || !mpcp::viable_remainder(set, *r)) {
      if (blacklist) block(leaf);
      return;
    }
    flags_[leaf] |= kLegal;
    const bool complete = r->empty();
    remainder_[leaf] = std::make_shared<const mpcp::Word>(std::move(*r));
    if (depth_[leaf] > depth_[deepest_]) deepest_ = leaf;
    if (complete) {
      if (!complete_) complete_ = leaf;
    } else {
      expand(leaf, set.count);
    }
  }
  for (std::uint32_t u = leaf; u != 0; u = parent_[u]) pheromone_[u] += 1.0;
}

std::string TileTree::stats_line() const {
  return "max_depth=" + std::to_string(max_depth()) + " nodes=" + std::to_string(size());
}

TileTree aco_iteration(const TileTree& tree, const mpcp::TileSet& set, std::size_t ants, Rng& rng, bool blacklist) {
  std::vector<std::uint32_t> leaves;
  for (std::size_t k = 0; k < ants; ++k) leaves.push_back(tree.walk(rng));
  TileTree next = tree;
  for (auto leaf : leaves) next.settle(set, leaf, blacklist);
  return next;
}

namespace {

using AcoState = State<AcoTraits>;
using PsoState = State<PsoTraits>;

std::shared_ptr<const mpcp::TileSet> compile_input(const uga::Input& input) {
  if (!input.machine) throw PreconditionViolation("setProb: no machine");
  auto set = std::make_shared<mpcp::TileSet>(mpcp::compile(*input.machine, input.word));
  if (input.tamper) input.tamper(*set);
  return set;
}

}  // namespace

FunctionSuite<AcoTraits> make_aco_suite() {
  FunctionSuite<AcoTraits> suite;
  suite.init = [](const AcoAlgorithm& a) {
    if (a.ants == 0) throw ValidationError("ACO needs at least one ant");
    return a;
  };
  suite.set_problem = [](const uga::Input& in, const AcoState& s, Rng&) {
    return std::pair{compile_input(in), s.extra()};
  };
  // Any number of ants on a fresh tree can only stand on the initial tile.
  suite.generate = [](const AcoState& s, Rng&) {
    return std::pair{std::vector<std::uint32_t>(s.extra().ants, 1), s.extra()};
  };
  suite.next = [](const AcoState& s, Rng& rng) {
    const TileTree& tree = s.fpw();
    if (tree.dead()) throw ExhaustedBlacklist("every branch of the tile tree is blocked");
    std::vector<std::uint32_t> leaves;
    for (std::size_t k = 0; k < s.extra().ants; ++k) leaves.push_back(tree.walk(rng));
    return std::pair{std::move(leaves), s.extra()};
  };
  suite.instance_rules.emplace(
      "simulate", InstanceRule<AcoTraits>{"simulate", FpwFn<AcoTraits>([](const AcoState& s, Rng&) {
                                            TileTree tree = s.has_fpw() ? s.fpw() : TileTree::fresh(*s.prob());
                                            for (auto leaf : s.sols()) tree.settle(*s.prob(), leaf, s.extra().blacklist);
                                            return std::pair{std::move(tree), s.extra()};
                                          })});
  suite.evaluate_premise = "simulate";
  suite.beval = [](const AcoState& s, Rng&) {
    const TileTree& tree = s.fpw();
    return std::pair{tree.path(tree.complete_node().value_or(tree.deepest_legal())), s.extra()};
  };
  suite.stop = [](const AcoState& s) {
    const auto& best = s.best();
    const auto done = s.fpw().complete_node();
    return done && !best.empty() && s.prob()->is_closing(best.back()) && s.fpw().path(*done) == best;
  };
  return suite;
}

namespace {

void count_evaluate(uga::Stats& stats, std::size_t& stalled, std::int64_t value, std::optional<std::int64_t>& prev) {
  stats.fitness.push_back(value);
  stalled = (prev && value == *prev) ? stalled + 1 : 0;
  stats.attempts_max = std::max(stats.attempts_max, stalled);
  prev = value;
}

}  // namespace

SwarmResult aco_run_universal(const tm::TuringMachine& machine, const std::vector<tm::Symbol>& input,
                              std::size_t iterations, const AcoOptions& options) {
  SwarmResult result;
  uga::Input pexp{std::make_shared<tm::TuringMachine>(machine), input, options.tamper};
  const auto suite = make_aco_suite();
  std::optional<std::int64_t> prev;
  std::size_t stalled = 0;
  std::string tree_stats;
  const StepObserver<AcoTraits> observe = [&](const std::vector<RuleApplication>& apps, const AcoState& s) {
    for (const auto& app : apps) {
      result.trace.push_back(app);
      if (app.rule == "next-generation") ++result.stats.generations;
      if (app.rule == "evaluate") {
        count_evaluate(result.stats, stalled, s.fpw().max_depth(), prev);
        result.stats.peak_len = std::max<std::size_t>(result.stats.peak_len, s.fpw().max_depth());
        tree_stats = s.fpw().stats_line();
      }
    }
    if (options.observer) options.observer(apps, s);
  };
  Rng rng(options.seed);
  RunResult<AcoTraits> run;
  try {
    run = compute(pexp, AcoAlgorithm{options.ants, options.blacklist}, suite, rng, aco_rule_budget(iterations),
                  observe);
  } catch (const ExhaustedBlacklist&) {
    result.outcome = uga::Outcome::kStuck;
    result.extra_stats = tree_stats;
    return result;
  }
  result.extra_stats = tree_stats;
  if (run.state.has_best()) result.best = run.state.best();
  if (!run.terminated) return result;
  result.outcome = uga::Outcome::kAccepted;
  result.history = uga::decode_history(*run.state.prob(), result.best);
  return result;
}

namespace {

// Longest viable prefix of a particle, reusing the incumbent's remainder
// when the particle starts with the incumbent's tiles.
std::pair<std::int64_t, mpcp::Word> score(const mpcp::TileSet& set, const mpcp::TileSeq& tiles,
                                          const mpcp::TileSeq* best, const mpcp::Word& best_r) {
  if (tiles.empty()) return {0, {}};
  std::size_t k;
  mpcp::Word r;
  if (best && !best->empty() && tiles.size() >= best->size() &&
      std::equal(best->begin(), best->end(), tiles.begin())) {
    k = best->size();
    r = best_r;
  } else {
    k = 1;
    r = *mpcp::advance(mpcp::Word{}, set[tiles[0]]);
  }
  for (; k < tiles.size(); ++k) {
    auto next = mpcp::advance(r, set[tiles[k]]);
    if (!next || !mpcp::viable_remainder(set, *next)) break;
    r = std::move(*next);
  }
  return {static_cast<std::int64_t>(k), std::move(r)};
}

}  // namespace

FunctionSuite<PsoTraits> make_pso_suite() {
  FunctionSuite<PsoTraits> suite;
  suite.init = [](const PsoAlgorithm& a) {
    if (a.particles == 0) throw ValidationError("PSO needs at least one particle");
    PsoExtra x;
    x.particles = a.particles;
    x.blacklist = a.blacklist;
    x.eligible.assign(a.tile_count, true);
    return x;
  };
  suite.set_problem = [](const uga::Input& in, const PsoState& s, Rng&) {
    auto set = compile_input(in);
    if (s.extra().eligible.size() != set->count) throw PreconditionViolation("blacklist size differs from |T|");
    return std::pair{std::move(set), s.extra()};
  };
  suite.generate = [](const PsoState& s, Rng&) {
    return std::pair{std::vector<Particle>(s.extra().particles, Particle{{0}, std::nullopt}), s.extra()};
  };
  suite.aeval = [](const PsoState& s, Rng&) {
    const auto& set = *s.prob();
    PsoExtra x = s.extra();
    x.scores.clear();
    x.remainders.clear();
    const mpcp::TileSeq* best = s.has_best() ? &s.best() : nullptr;
    std::int64_t top = 0;
    for (const auto& p : s.sols()) {
      auto [k, r] = score(set, p.tiles, best, x.best_remainder);
      x.scores.push_back(k);
      x.remainders.push_back(std::move(r));
      top = std::max(top, k);
    }
    return std::pair{top, std::move(x)};
  };
  suite.beval = [](const PsoState& s, Rng&) {
    PsoExtra x = s.extra();
    const auto& sols = s.sols();
    const auto at = static_cast<std::size_t>(std::max_element(x.scores.begin(), x.scores.end()) - x.scores.begin());
    const auto k = static_cast<std::size_t>(x.scores[at]);
    if (!s.has_best() || k > s.best().size()) {
      mpcp::TileSeq best(sols[at].tiles.begin(), sols[at].tiles.begin() + static_cast<std::ptrdiff_t>(k));
      x.best_remainder = x.remainders[at];
      std::fill(x.eligible.begin(), x.eligible.end(), true);
      return std::pair{std::move(best), std::move(x)};
    }
    return std::pair{s.best(), std::move(x)};
  };
  suite.stop = [](const PsoState& s) {
    const auto& best = s.best();
    return !best.empty() && static_cast<std::int64_t>(best.size()) == s.fpw() && s.prob()->is_closing(best.back()) &&
           s.extra().best_remainder.empty();
  };
  suite.instance_rules.emplace(
      "divert", InstanceRule<PsoTraits>{"divert", SolsFn<PsoTraits>([](const PsoState& s, Rng& rng) {
                                          PsoExtra x = s.extra();
                                          auto sols = s.sols();
                                          const std::size_t n = s.prob()->count;
                                          for (std::size_t k = 0; k < sols.size(); ++k) {
                                            if (!x.blacklist) {
                                              sols[k].pending = static_cast<mpcp::TileIndex>(1 + rng.uniform_index(n - 1));
                                              continue;
                                            }
                                            std::vector<mpcp::TileIndex> pool;
                                            for (std::size_t i = 1; i < n; ++i) {
                                              if (x.eligible[i]) pool.push_back(static_cast<mpcp::TileIndex>(i));
                                            }
                                            if (pool.empty()) {
                                              if (k == 0) throw ExhaustedBlacklist("every tile has been rejected");
                                              sols[k].pending.reset();
                                              continue;
                                            }
                                            const auto i = pool[rng.uniform_index(pool.size())];
                                            x.eligible[i] = false;
                                            sols[k].pending = i;
                                          }
                                          return std::pair{std::move(sols), std::move(x)};
                                        })});
  suite.instance_rules.emplace("aim", InstanceRule<PsoTraits>{"aim", SolsFn<PsoTraits>([](const PsoState& s, Rng&) {
                                                                auto sols = s.sols();
                                                                for (auto& p : sols) p.tiles = s.best();
                                                                return std::pair{std::move(sols), s.extra()};
                                                              })});
  suite.instance_rules.emplace("move", InstanceRule<PsoTraits>{"move", SolsFn<PsoTraits>([](const PsoState& s, Rng&) {
                                                                 auto sols = s.sols();
                                                                 for (auto& p : sols) {
                                                                   if (p.pending) p.tiles.push_back(*p.pending);
                                                                   p.pending.reset();
                                                                 }
                                                                 return std::pair{std::move(sols), s.extra()};
                                                               })});
  suite.next_gen_expansion =
      Statement::chain({Statement::instance("divert"), Statement::instance("aim"), Statement::instance("move")});
  return suite;
}

SwarmResult pso_run_universal(const tm::TuringMachine& machine, const std::vector<tm::Symbol>& input,
                              std::size_t iterations, const PsoOptions& options) {
  if (options.particles == 0) throw ValidationError("PSO needs at least one particle");
  SwarmResult result;
  uga::Input pexp{std::make_shared<tm::TuringMachine>(machine), input, options.tamper};
  const PsoAlgorithm algorithm{options.particles, options.blacklist, mpcp::compile(machine, input).count};
  const auto suite = make_pso_suite();
  std::optional<std::int64_t> prev;
  std::size_t stalled = 0;
  const StepObserver<PsoTraits> observe = [&](const std::vector<RuleApplication>& apps, const PsoState& s) {
    for (const auto& app : apps) {
      result.trace.push_back(app);
      if (app.rule == "next-generation") ++result.stats.generations;
      if (app.rule == "evaluate") count_evaluate(result.stats, stalled, s.fpw(), prev);
    }
    if (s.has_sols()) {
      for (const auto& p : s.sols()) result.stats.peak_len = std::max(result.stats.peak_len, p.tiles.size());
    }
    if (options.observer) options.observer(apps, s);
  };
  Rng rng(options.seed);
  RunResult<PsoTraits> run;
  try {
    run = compute(pexp, algorithm, suite, rng, uga::rule_budget(iterations), observe);
  } catch (const ExhaustedBlacklist&) {
    result.outcome = uga::Outcome::kStuck;
    return result;
  }
  if (run.state.has_best()) result.best = run.state.best();
  if (!run.terminated) return result;
  result.outcome = uga::Outcome::kAccepted;
  result.history = uga::decode_history(*run.state.prob(), result.best);
  return result;
}

}  // namespace slsvm::swarm
