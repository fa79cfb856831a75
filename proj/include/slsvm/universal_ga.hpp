#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slsvm/engine.hpp"
#include "slsvm/mpcp.hpp"
#include "slsvm/turing_machine.hpp"

namespace slsvm::uga {

enum class Mode { kStochastic, kDeterministic };
enum class Variant { kFullHistory, kTrimmed };

// Problem expression: the machine and its input. `tamper` edits the compiled
// tile set before the run starts (negative controls only).
struct Input {
  std::shared_ptr<const tm::TuringMachine> machine;
  std::vector<tm::Symbol> word;
  std::function<void(mpcp::TileSet&)> tamper;
};

// The blacklist is sized here, before setProb has run, so the descriptor
// carries the tile count.
struct Algorithm {
  std::size_t tile_count = 0;
  Mode mode = Mode::kStochastic;
  Variant variant = Variant::kFullHistory;
};

struct Extra {
  std::vector<bool> eligible;  // eligible[i]: tile i may still be drawn here
  // Remainder b[|a|:] of the verified prefix, so evaluation costs one tile
  // rather than a full re-concatenation.
  mpcp::Word verified;
  std::int64_t sols_dropped = 0;  // tiles trimmed away before Sols was built

  // Trimmed variant.
  std::int64_t dropped_tiles = 0;
  std::int64_t dropped_top = 0;     // symbols of a removed with the dropped tiles
  std::int64_t dropped_bottom = 0;  // symbols of b removed with the dropped tiles
  mpcp::Word open_segment;
  std::optional<mpcp::Word> last_full_config;
  bool final_seen = false;

  std::int64_t skip_offset() const { return dropped_bottom - dropped_top; }
};

struct Traits {
  using Pexp = Input;
  using Algorithm = uga::Algorithm;
  using Problem = std::shared_ptr<const mpcp::TileSet>;
  using Solutions = mpcp::TileSeq;  // the single individual
  using Solution = mpcp::TileSeq;
  using Fpw = std::int64_t;
  using Extra = uga::Extra;
};

using UgaState = State<Traits>;

Extra uga_init(const Algorithm& algorithm);
std::pair<Traits::Problem, Extra> uga_set_problem(const Input& input, const UgaState& s);
std::pair<mpcp::TileSeq, Extra> uga_generate(const UgaState& s, Rng& rng, Mode mode);
std::pair<mpcp::TileSeq, Extra> uga_select(const UgaState& s);
std::pair<mpcp::TileSeq, Extra> uga_cross(const UgaState& s);
std::pair<mpcp::TileSeq, Extra> uga_mutate(const UgaState& s, Rng& rng, Mode mode);
std::pair<std::int64_t, Extra> uga_aeval(const UgaState& s, Variant variant);
std::pair<mpcp::TileSeq, Extra> uga_beval(const UgaState& s, Variant variant);
bool uga_stop(const UgaState& s, Variant variant);

FunctionSuite<Traits> make_suite(Mode mode, Variant variant);

// Configurations written on the bottom side of a complete solution, from
// the first one up to the first in a final state.
tm::History decode_history(const mpcp::TileSet& set, std::span<const mpcp::TileIndex> solution);

enum class Outcome { kAccepted, kBudgetExhausted, kStuck };
std::string to_string(Outcome outcome);

struct Stats {
  std::size_t generations = 0;
  std::size_t attempts_max = 0;  // most failed draws spent on one position
  std::size_t peak_len = 0;      // longest individual held in Sols
  std::vector<std::int64_t> fitness;  // FPW after every evaluate

  std::string line() const;
};

struct Result {
  Outcome outcome = Outcome::kBudgetExhausted;
  std::optional<tm::History> history;          // FullHistory successes
  std::optional<tm::Configuration> final_config;
  Stats stats;
  RunTrace trace;
  mpcp::TileSeq best;
  std::shared_ptr<const mpcp::TileSet> tiles;
};

struct RunOptions {
  std::uint64_t seed = 0;
  std::function<void(mpcp::TileSet&)> tamper;
  // Called after every transition; lets tests inspect intermediate states.
  StepObserver<Traits> observer;
};

// Runs the universal GA for at most `generations` generations.
Result run_universal(const tm::TuringMachine& machine, const std::vector<tm::Symbol>& input, Mode mode,
                     Variant variant, std::size_t generations, const RunOptions& options = {});

// Rule applications used by a run of g generations: 5 + 6g.
constexpr std::size_t rule_budget(std::size_t generations) { return 5 + 6 * generations; }

}  // namespace slsvm::uga
