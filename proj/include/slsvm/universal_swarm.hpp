#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "slsvm/engine.hpp"
#include "slsvm/mpcp.hpp"
#include "slsvm/universal_ga.hpp"

namespace slsvm::swarm {

// Tree of tile sequences grown on demand. Node 0 is the root (empty
// sequence) and has the single child 1, carrying the initial tile. An
// expanded node has one child per tile index 1..N-1, stored contiguously.
// Pheromone lives on the edge into a node.
class TileTree {
 public:
  static TileTree fresh(const mpcp::TileSet& set);

  std::size_t size() const noexcept { return parent_.size(); }
  std::uint32_t parent(std::uint32_t v) const { return parent_.at(v); }
  mpcp::TileIndex tile(std::uint32_t v) const { return tile_.at(v); }
  std::uint32_t depth(std::uint32_t v) const { return depth_.at(v); }
  double pheromone(std::uint32_t v) const { return pheromone_.at(v); }
  bool expanded(std::uint32_t v) const { return first_child_.at(v) != 0; }
  bool legal(std::uint32_t v) const { return flags_.at(v) & kLegal; }
  bool blocked(std::uint32_t v) const { return flags_.at(v) & kBlocked; }
  // [first, last) child ids; empty for unexpanded nodes.
  std::pair<std::uint32_t, std::uint32_t> children(std::uint32_t v) const;

  mpcp::TileSeq path(std::uint32_t v) const;
  std::optional<std::uint32_t> complete_node() const { return complete_; }
  std::uint32_t deepest_legal() const { return deepest_; }
  std::uint32_t max_depth() const { return depth_.at(deepest_); }
  bool dead() const { return blocked(0); }

  // Walks root to leaf choosing children in proportion to their pheromone.
  // Returns the node the ant stopped at.
  std::uint32_t walk(Rng& rng) const;

  // Reinforces and expands the ant's leaf when its path is viable; blocks it
  // for good when it is not and blacklisting is on.
  void settle(const mpcp::TileSet& set, std::uint32_t leaf, bool blacklist);

  std::string stats_line() const;

 private:
  enum : std::uint8_t { kLegal = 1, kBlocked = 2 };

  std::uint32_t add(std::uint32_t parent, mpcp::TileIndex tile);
  void expand(std::uint32_t v, std::size_t tile_count);
  void block(std::uint32_t v);

  std::size_t fanout_ = 0;
  std::vector<std::uint32_t> parent_;
  std::vector<mpcp::TileIndex> tile_;
  std::vector<std::uint32_t> depth_;
  std::vector<std::uint32_t> first_child_;
  std::vector<double> pheromone_;
  std::vector<std::uint8_t> flags_;
  // Set on legal nodes and never changed after, so tree copies share them.
  std::vector<std::shared_ptr<const mpcp::Word>> remainder_;
  std::optional<std::uint32_t> complete_;
  std::uint32_t deepest_ = 0;
};

// One ACO iteration: every ant walks the current tree, then all updates
// are applied in ant order.
TileTree aco_iteration(const TileTree& tree, const mpcp::TileSet& set, std::size_t ants, Rng& rng, bool blacklist);

struct AcoAlgorithm {
  std::size_t ants = 1;
  bool blacklist = true;
};

struct AcoTraits {
  using Pexp = uga::Input;
  using Algorithm = AcoAlgorithm;
  using Problem = std::shared_ptr<const mpcp::TileSet>;
  using Solutions = std::vector<std::uint32_t>;  // leaf reached by each ant
  using Solution = mpcp::TileSeq;
  using Fpw = TileTree;
  using Extra = AcoAlgorithm;
};

FunctionSuite<AcoTraits> make_aco_suite();

// 6 + 4g rule applications for g iterations.
constexpr std::size_t aco_rule_budget(std::size_t iterations) { return 6 + 4 * iterations; }

struct SwarmResult {
  uga::Outcome outcome = uga::Outcome::kBudgetExhausted;
  std::optional<tm::History> history;
  uga::Stats stats;         // generations, attempts_max, peak_len
  std::string extra_stats;  // ACO: "max_depth=<n> nodes=<n>"
  RunTrace trace;
  mpcp::TileSeq best;
};

struct AcoOptions {
  std::size_t ants = 4;
  bool blacklist = true;
  std::uint64_t seed = 0;
  std::function<void(mpcp::TileSet&)> tamper;
  StepObserver<AcoTraits> observer;
};

SwarmResult aco_run_universal(const tm::TuringMachine& machine, const std::vector<tm::Symbol>& input,
                              std::size_t iterations, const AcoOptions& options = {});

struct Particle {
  mpcp::TileSeq tiles;
  std::optional<mpcp::TileIndex> pending;  // random force, consumed by move

  friend bool operator==(const Particle&, const Particle&) = default;
};

struct PsoAlgorithm {
  std::size_t particles = 1;
  bool blacklist = true;
  std::size_t tile_count = 0;
};

struct PsoExtra {
  std::size_t particles = 1;
  bool blacklist = true;
  std::vector<bool> eligible;
  mpcp::Word best_remainder;
  std::vector<std::int64_t> scores;        // per particle, from the last evaluate
  std::vector<mpcp::Word> remainders;      // of each particle's scored prefix
};

struct PsoTraits {
  using Pexp = uga::Input;
  using Algorithm = PsoAlgorithm;
  using Problem = std::shared_ptr<const mpcp::TileSet>;
  using Solutions = std::vector<Particle>;
  using Solution = mpcp::TileSeq;
  using Fpw = std::int64_t;  // best particle's viable prefix length
  using Extra = PsoExtra;
};

FunctionSuite<PsoTraits> make_pso_suite();

struct PsoOptions {
  std::size_t particles = 4;
  bool blacklist = true;
  std::uint64_t seed = 0;
  std::function<void(mpcp::TileSet&)> tamper;
  StepObserver<PsoTraits> observer;
};

SwarmResult pso_run_universal(const tm::TuringMachine& machine, const std::vector<tm::Symbol>& input,
                              std::size_t iterations, const PsoOptions& options = {});

}  // namespace slsvm::swarm
