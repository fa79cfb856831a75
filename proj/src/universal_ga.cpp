#include "slsvm/universal_ga.hpp"

#include <algorithm>

namespace slsvm::uga {

namespace {

const mpcp::TileSet& tiles_of(const UgaState& s) { return *s.prob(); }

mpcp::TileIndex draw(const std::vector<bool>& eligible, Rng& rng, Mode mode) {
  std::vector<mpcp::TileIndex> pool;
  for (std::size_t i = 1; i < eligible.size(); ++i) {
    if (eligible[i]) pool.push_back(static_cast<mpcp::TileIndex>(i));
  }
  if (pool.empty()) throw ExhaustedBlacklist("every tile has been rejected at this position");
  if (mode == Mode::kDeterministic) return pool.front();
  return pool[rng.uniform_index(pool.size())];
}

std::int64_t count_separators(const mpcp::Word& w, char32_t sep) {
  return std::count(w.begin(), w.end(), sep);
}

// Feeds newly verified bottom symbols to the segment tracker.
void absorb(Extra& x, const mpcp::TileSet& set, const mpcp::Word& bottom) {
  for (char32_t c : bottom) {
    if (c != set.separator) {
      x.open_segment.push_back(c);
      continue;
    }
    if (!x.open_segment.empty() && !x.final_seen) {
      x.last_full_config = x.open_segment;
      x.final_seen = std::any_of(x.open_segment.begin(), x.open_segment.end(),
                                 [&](char32_t s) { return set.final_symbol[s]; });
    }
    x.open_segment.clear();
  }
}

void reset(std::vector<bool>& eligible) { std::fill(eligible.begin(), eligible.end(), true); }

}  // namespace

Extra uga_init(const Algorithm& algorithm) {
  Extra x;
  x.eligible.assign(algorithm.tile_count, true);
  return x;
}

std::pair<Traits::Problem, Extra> uga_set_problem(const Input& input, const UgaState& s) {
  if (!input.machine) throw PreconditionViolation("setProb: no machine");
  auto set = std::make_shared<mpcp::TileSet>(mpcp::compile(*input.machine, input.word));
  if (input.tamper) input.tamper(*set);
  Extra x = s.extra();
  if (x.eligible.size() != set->count) {
    throw PreconditionViolation("blacklist sized for " + std::to_string(x.eligible.size()) + " tiles, problem has " +
                                std::to_string(set->count));
  }
  return {std::move(set), std::move(x)};
}

std::pair<mpcp::TileSeq, Extra> uga_generate(const UgaState& s, Rng& rng, Mode mode) {
  Extra x = s.extra();
  const mpcp::TileIndex i = draw(x.eligible, rng, mode);
  x.eligible[i] = false;
  x.sols_dropped = 0;
  return {mpcp::TileSeq{0, i}, std::move(x)};
}

std::pair<mpcp::TileSeq, Extra> uga_select(const UgaState& s) { return {s.sols(), s.extra()}; }
std::pair<mpcp::TileSeq, Extra> uga_cross(const UgaState& s) { return {s.sols(), s.extra()}; }

std::pair<mpcp::TileSeq, Extra> uga_mutate(const UgaState& s, Rng& rng, Mode mode) {
  Extra x = s.extra();
  const auto& sols = s.sols();
  const bool all_correct = s.fpw() == x.sols_dropped + static_cast<std::int64_t>(sols.size());
  mpcp::TileIndex i;
  if (all_correct) {
    reset(x.eligible);
    i = draw(x.eligible, rng, mode);
  } else {
    i = draw(x.eligible, rng, mode);
  }
  x.eligible[i] = false;
  mpcp::TileSeq next = s.best();
  next.push_back(i);
  x.sols_dropped = x.dropped_tiles;
  return {std::move(next), std::move(x)};
}

std::pair<std::int64_t, Extra> uga_aeval(const UgaState& s, Variant variant) {
  const auto& set = tiles_of(s);
  const auto& sols = s.sols();
  Extra x = s.extra();
  const bool trimmed = variant == Variant::kTrimmed;

  if (!s.has_fpw()) {
    // First evaluation: [initial, t]. 2 if t is correct, else 1.
    x.verified = *mpcp::advance(mpcp::Word{}, set[sols.at(0)]);
    if (trimmed) absorb(x, set, set[sols[0]].bottom);
    if (sols.size() >= 2) {
      auto r = mpcp::advance(x.verified, set[sols[1]]);
      if (r && mpcp::viable_remainder(set, *r)) {
        x.verified = std::move(*r);
        if (trimmed) absorb(x, set, set[sols[1]].bottom);
        reset(x.eligible);
        return {2, std::move(x)};
      }
    }
    return {1, std::move(x)};
  }

  const std::int64_t fpw = s.fpw();
  const std::int64_t unverified = x.sols_dropped + static_cast<std::int64_t>(sols.size()) - fpw;
  if (unverified != 1) return {fpw, std::move(x)};
  const mpcp::TileIndex last = sols.back();
  auto r = mpcp::advance(x.verified, set[last]);
  if (!r || !mpcp::viable_remainder(set, *r)) return {fpw, std::move(x)};
  x.verified = std::move(*r);
  if (trimmed) absorb(x, set, set[last].bottom);
  reset(x.eligible);
  return {fpw + 1, std::move(x)};
}

std::pair<mpcp::TileSeq, Extra> uga_beval(const UgaState& s, Variant variant) {
  Extra x = s.extra();
  const auto& sols = s.sols();
  const auto keep = static_cast<std::size_t>(std::clamp<std::int64_t>(s.fpw() - x.sols_dropped, 0,
                                                                      static_cast<std::int64_t>(sols.size())));
  mpcp::TileSeq best(sols.begin(), sols.begin() + static_cast<std::ptrdiff_t>(keep));
  if (variant != Variant::kTrimmed || best.empty()) return {std::move(best), std::move(x)};

  // Drop leading tiles once their bottom is inside the matched region and
  // the tops kept after them already hold two separators.
  const auto& set = tiles_of(s);
  std::int64_t a_len = x.dropped_top;
  std::int64_t hashes = 0;
  for (auto i : best) {
    a_len += static_cast<std::int64_t>(set[i].top.size());
    hashes += count_separators(set[i].top, set.separator);
  }
  std::size_t drop = 0;
  while (drop + 1 < best.size()) {
    const auto& t = set[best[drop]];
    const std::int64_t after = hashes - count_separators(t.top, set.separator);
    if (after < 2 || x.dropped_bottom + static_cast<std::int64_t>(t.bottom.size()) > a_len) break;
    hashes = after;
    x.dropped_top += static_cast<std::int64_t>(t.top.size());
    x.dropped_bottom += static_cast<std::int64_t>(t.bottom.size());
    ++drop;
  }
  x.dropped_tiles += static_cast<std::int64_t>(drop);
  best.erase(best.begin(), best.begin() + static_cast<std::ptrdiff_t>(drop));
  return {std::move(best), std::move(x)};
}

bool uga_stop(const UgaState& s, Variant variant) {
  const auto& best = s.best();
  const auto& x = s.extra();
  if (best.empty()) return false;
  if (x.dropped_tiles + static_cast<std::int64_t>(best.size()) != s.fpw()) return false;
  if (!tiles_of(s).is_closing(best.back())) return false;
  return variant != Variant::kTrimmed || x.verified.empty();
}

FunctionSuite<Traits> make_suite(Mode mode, Variant variant) {
  FunctionSuite<Traits> suite;
  suite.init = uga_init;
  suite.set_problem = [](const Input& in, const UgaState& s, Rng&) { return uga_set_problem(in, s); };
  suite.generate = [mode](const UgaState& s, Rng& rng) { return uga_generate(s, rng, mode); };
  suite.aeval = [variant](const UgaState& s, Rng&) { return uga_aeval(s, variant); };
  suite.beval = [variant](const UgaState& s, Rng&) { return uga_beval(s, variant); };
  suite.stop = [variant](const UgaState& s) { return uga_stop(s, variant); };
  suite.instance_rules.emplace(
      "select", InstanceRule<Traits>{"selection", SolsFn<Traits>([](const UgaState& s, Rng&) { return uga_select(s); })});
  suite.instance_rules.emplace(
      "cross", InstanceRule<Traits>{"crossover", SolsFn<Traits>([](const UgaState& s, Rng&) { return uga_cross(s); })});
  suite.instance_rules.emplace(
      "mutate", InstanceRule<Traits>{"mutation", SolsFn<Traits>([mode](const UgaState& s, Rng& rng) {
                                       return uga_mutate(s, rng, mode);
                                     })});
  suite.next_gen_expansion =
      Statement::chain({Statement::instance("select"), Statement::instance("cross"), Statement::instance("mutate")});
  return suite;
}

tm::History decode_history(const mpcp::TileSet& set, std::span<const mpcp::TileIndex> solution) {
  const mpcp::View v = mpcp::view(set, solution);
  if (solution.empty() || v.a != v.b) throw PreconditionViolation("decode_history: not a complete solution");
  tm::History h;
  h.status = tm::HaltStatus::kAccepted;
  mpcp::Word segment;
  bool started = false;
  for (char32_t c : v.b) {
    if (c != set.separator) {
      segment.push_back(c);
      continue;
    }
    if (segment.empty() && !started) continue;
    started = true;
    tm::Configuration conf = mpcp::decode_configuration(set, segment);
    segment.clear();
    const bool final = set.final_symbol[*set.id(conf.state)];
    h.configurations.push_back(std::move(conf));
    if (final) return h;
  }
  throw MalformedSegment("no configuration in a final state");
}

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::kAccepted: return "accepted";
    case Outcome::kBudgetExhausted: return "budget-exhausted";
    case Outcome::kStuck: return "stuck";
  }
  return "unknown";
}

std::string Stats::line() const {
  return "generations=" + std::to_string(generations) + " attempts_max=" + std::to_string(attempts_max) +
         " peak_len=" + std::to_string(peak_len);
}

Result run_universal(const tm::TuringMachine& machine, const std::vector<tm::Symbol>& input, Mode mode,
                     Variant variant, std::size_t generations, const RunOptions& options) {
  Result result;
  Input pexp{std::make_shared<tm::TuringMachine>(machine), input, options.tamper};
  const Algorithm algorithm{mpcp::compile(machine, input).count, mode, variant};
  const auto suite = make_suite(mode, variant);

  std::optional<std::int64_t> prev_fpw;
  std::size_t failed_here = 0;
  const StepObserver<Traits> observe = [&](const std::vector<RuleApplication>& apps, const UgaState& s) {
    for (const auto& app : apps) {
      result.trace.push_back(app);
      if (app.rule == "next-generation") ++result.stats.generations;
      if (app.rule == "evaluate") {
        const std::int64_t fpw = s.fpw();
        result.stats.fitness.push_back(fpw);
        const bool first = !prev_fpw;
        if ((first && fpw == 1) || (!first && fpw == *prev_fpw)) {
          ++failed_here;
        } else {
          failed_here = 0;
        }
        result.stats.attempts_max = std::max(result.stats.attempts_max, failed_here);
        prev_fpw = fpw;
      }
    }
    if (s.has_sols()) result.stats.peak_len = std::max(result.stats.peak_len, s.sols().size());
    if (options.observer) options.observer(apps, s);
  };

  Rng rng(options.seed);
  RunResult<Traits> run;
  try {
    run = compute(pexp, algorithm, suite, rng, rule_budget(generations), observe);
  } catch (const ExhaustedBlacklist&) {
    result.outcome = Outcome::kStuck;
    return result;
  }
  if (run.state.has_prob()) result.tiles = run.state.prob();
  if (run.state.has_best()) result.best = run.state.best();
  if (!run.terminated) {
    result.outcome = Outcome::kBudgetExhausted;
    return result;
  }
  result.outcome = Outcome::kAccepted;
  if (variant == Variant::kFullHistory) {
    result.history = decode_history(*result.tiles, result.best);
    result.final_config = result.history->configurations.back();
  } else if (const auto& cfg = run.state.extra().last_full_config; cfg && run.state.extra().final_seen) {
    result.final_config = mpcp::decode_configuration(*result.tiles, *cfg);
  }
  return result;
}

}  // namespace slsvm::uga
