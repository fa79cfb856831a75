#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slsvm/errors.hpp"

namespace slsvm::tm {

using Symbol = std::string;

enum class Move { kLeft, kRight };

struct Action {
  std::string next;
  Symbol write;
  Move move;

  friend bool operator==(const Action&, const Action&) = default;
};

// Deterministic single-tape machine on a semi-infinite tape (cells 0, 1, ...).
// Halts by entering a final state or by reaching a (state, symbol) pair
// with no transition.
struct TuringMachine {
  std::vector<std::string> states;
  std::vector<Symbol> input_alphabet;
  std::vector<Symbol> tape_alphabet;
  Symbol blank;
  std::string start;
  std::set<std::string> finals;
  std::map<std::pair<std::string, Symbol>, Action> delta;
  // Set by normalize(): the symbol written wherever the original wrote blank.
  std::optional<Symbol> pseudo_blank;

  bool is_state(std::string_view name) const;
  bool is_tape_symbol(std::string_view name) const;
  bool is_input_symbol(std::string_view name) const;
  bool is_final(std::string_view name) const { return finals.count(std::string(name)) != 0; }
  const Action* lookup(const std::string& state, const Symbol& read) const;
  // True when no transition writes the blank.
  bool writes_no_blank() const;

  // Throws ValidationError on any broken invariant.
  void validate() const;
};

// Parses the line-based machine description:
//
//   states: q0 qf
//   input_alphabet: 1
//   tape_alphabet: 1 _
//   blank: _
//   start: q0
//   accept: qf
//   rule: q0 1 -> qf 1 R
//
// '#' starts a comment. Throws ParseError (with line) or ValidationError.
TuringMachine parse_tm(std::string_view text);
TuringMachine load_tm(const std::string& path);

// Renders a machine back into the text format parse_tm reads.
std::string render_tm(const TuringMachine& tm);

// Rewrites every blank-writing transition to write a fresh pseudo-blank and
// twins every blank-reading transition with one reading the pseudo-blank.
TuringMachine normalize(const TuringMachine& tm);

// Tokenizes an input word: whitespace-separated tokens if any whitespace is
// present, otherwise greedy longest match against the input alphabet.
std::vector<Symbol> tokenize_input(const TuringMachine& tm, std::string_view word);

// alpha q beta, head on the first symbol of beta.
struct Configuration {
  std::vector<Symbol> left;
  std::string state;
  std::vector<Symbol> right;

  // Trailing blanks of right trimmed; a sole blank kept under the head.
  Configuration canonical(const Symbol& blank) const;
  // "alpha q beta" with symbols of alpha and beta concatenated, "-" for empty alpha.
  std::string render() const;
  // Compact "alpha q beta" without separators ("q01", "1qf_").
  std::string compact() const;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

enum class HaltStatus { kAccepted, kStuck, kBudgetExhausted };

std::string to_string(HaltStatus status);

struct History {
  std::vector<Configuration> configurations;
  HaltStatus status = HaltStatus::kBudgetExhausted;

  friend bool operator==(const History&, const History&) = default;
};

// One configuration per line, in Configuration::render form.
std::string render_history(const History& history);

// The head tried to move left from cell 0.
class BoundaryViolation : public Error {
 public:
  BoundaryViolation(const std::string& message, History partial)
      : Error(message), partial_(std::move(partial)) {}
  const History& partial() const noexcept { return partial_; }

 private:
  History partial_;
};

// Direct simulation from q0 w (q0 B for empty w). At most max_steps
// transitions; the history holds every configuration reached.
History simulate(const TuringMachine& tm, const std::vector<Symbol>& input, std::size_t max_steps);

// Maps every occurrence of `from` to `to` and re-canonicalizes.
History map_symbol(const History& history, const Symbol& from, const Symbol& to, const Symbol& blank);

}  // namespace slsvm::tm
