#include "slsvm/turing_machine.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace slsvm::tm {

namespace {

bool contains(const std::vector<std::string>& items, std::string_view value) {
  return std::find(items.begin(), items.end(), value) != items.end();
}

std::vector<std::string> split_ws(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) out.push_back(token);
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool reserved_name(std::string_view name) {
  return name == "#" || name == "-" || name == "->" || name.find('|') != std::string_view::npos;
}

}  // namespace

bool TuringMachine::is_state(std::string_view name) const { return contains(states, name); }
bool TuringMachine::is_tape_symbol(std::string_view name) const { return contains(tape_alphabet, name); }
bool TuringMachine::is_input_symbol(std::string_view name) const { return contains(input_alphabet, name); }

const Action* TuringMachine::lookup(const std::string& state, const Symbol& read) const {
  auto it = delta.find({state, read});
  return it == delta.end() ? nullptr : &it->second;
}

bool TuringMachine::writes_no_blank() const {
  return std::none_of(delta.begin(), delta.end(), [&](const auto& rule) { return rule.second.write == blank; });
}

void TuringMachine::validate() const {
  auto fail = [](const std::string& msg) { throw ValidationError(msg); };
  if (states.empty()) fail("machine has no states");
  auto check_unique = [&](const std::vector<std::string>& names, const char* what) {
    std::set<std::string> seen;
    for (const auto& n : names) {
      if (reserved_name(n)) fail(std::string("reserved name '") + n + "' used as " + what);
      if (!seen.insert(n).second) fail(std::string("duplicate ") + what + " '" + n + "'");
    }
  };
  check_unique(states, "state");
  check_unique(tape_alphabet, "tape symbol");
  check_unique(input_alphabet, "input symbol");
  for (const auto& q : states) {
    if (is_tape_symbol(q)) fail("name '" + q + "' is both a state and a tape symbol");
  }
  if (!is_tape_symbol(blank)) fail("blank '" + blank + "' is not in the tape alphabet");
  if (is_input_symbol(blank)) fail("blank '" + blank + "' must not be an input symbol");
  for (const auto& a : input_alphabet) {
    if (!is_tape_symbol(a)) fail("input symbol '" + a + "' is not in the tape alphabet");
  }
  if (!is_state(start)) fail("start state '" + start + "' is not a state");
  for (const auto& f : finals) {
    if (!is_state(f)) fail("final state '" + f + "' is not a state");
  }
  if (pseudo_blank && !is_tape_symbol(*pseudo_blank)) fail("pseudo-blank is not in the tape alphabet");
  for (const auto& [key, action] : delta) {
    const auto& [q, x] = key;
    if (!is_state(q)) fail("rule from unknown state '" + q + "'");
    if (!is_tape_symbol(x)) fail("rule reads unknown symbol '" + x + "'");
    if (!is_state(action.next)) fail("rule enters unknown state '" + action.next + "'");
    if (!is_tape_symbol(action.write)) fail("rule writes unknown symbol '" + action.write + "'");
  }
}

TuringMachine parse_tm(std::string_view text) {
  TuringMachine tm;
  std::set<std::string> seen_keys;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError(line_no, "expected 'key: value'");
    const std::string key(trim(line.substr(0, colon)));
    const auto values = split_ws(line.substr(colon + 1));

    if (key == "rule") {
      if (values.size() != 6 || values[2] != "->") {
        throw ParseError(line_no, "rule must read 'state symbol -> state symbol L|R'");
      }
      Move move;
      if (values[5] == "L") {
        move = Move::kLeft;
      } else if (values[5] == "R") {
        move = Move::kRight;
      } else {
        throw ParseError(line_no, "move must be L or R, got '" + values[5] + "'");
      }
      auto [it, inserted] = tm.delta.emplace(std::pair{values[0], values[1]}, Action{values[3], values[4], move});
      if (!inserted) {
        throw ValidationError("line " + std::to_string(line_no) + ": nondeterministic transition for (" +
                              values[0] + ", " + values[1] + ")");
      }
      continue;
    }
    if (!seen_keys.insert(key).second) throw ParseError(line_no, "duplicate key '" + key + "'");
    auto single = [&]() -> std::string {
      if (values.size() != 1) throw ParseError(line_no, "'" + key + "' takes exactly one value");
      return values[0];
    };
    if (key == "states") {
      tm.states = values;
    } else if (key == "input_alphabet") {
      tm.input_alphabet = values;
    } else if (key == "tape_alphabet") {
      tm.tape_alphabet = values;
    } else if (key == "blank") {
      tm.blank = single();
    } else if (key == "start") {
      tm.start = single();
    } else if (key == "accept") {
      tm.finals = std::set<std::string>(values.begin(), values.end());
    } else {
      throw ParseError(line_no, "unknown key '" + key + "'");
    }
  }
  for (const char* required : {"states", "input_alphabet", "tape_alphabet", "blank", "start", "accept"}) {
    if (!seen_keys.count(required)) throw ParseError(line_no + 1, std::string("missing '") + required + "'");
  }
  tm.validate();
  return tm;
}

TuringMachine load_tm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read machine file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_tm(buffer.str());
}

std::string render_tm(const TuringMachine& tm) {
  auto join = [](const auto& items) {
    std::string out;
    for (const auto& s : items) {
      if (!out.empty()) out += ' ';
      out += s;
    }
    return out;
  };
  std::string out;
  out += "states: " + join(tm.states) + "\n";
  out += "input_alphabet: " + join(tm.input_alphabet) + "\n";
  out += "tape_alphabet: " + join(tm.tape_alphabet) + "\n";
  out += "blank: " + tm.blank + "\n";
  out += "start: " + tm.start + "\n";
  out += "accept: " + join(tm.finals) + "\n";
  for (const auto& [key, action] : tm.delta) {
    out += "rule: " + key.first + " " + key.second + " -> " + action.next + " " + action.write + " " +
           (action.move == Move::kLeft ? "L" : "R") + "\n";
  }
  return out;
}

TuringMachine normalize(const TuringMachine& tm) {
  if (tm.pseudo_blank && tm.writes_no_blank()) return tm;
  TuringMachine out = tm;
  Symbol pseudo = tm.blank + "^";
  while (out.is_tape_symbol(pseudo) || out.is_state(pseudo)) pseudo += "^";
  out.tape_alphabet.push_back(pseudo);
  out.pseudo_blank = pseudo;
  for (auto& [key, action] : out.delta) {
    if (action.write == tm.blank) action.write = pseudo;
  }
  std::vector<std::pair<std::pair<std::string, Symbol>, Action>> twins;
  for (const auto& [key, action] : out.delta) {
    if (key.second == tm.blank) twins.push_back({{key.first, pseudo}, action});
  }
  for (auto& [key, action] : twins) out.delta.emplace(key, action);
  return out;
}

std::vector<Symbol> tokenize_input(const TuringMachine& tm, std::string_view word) {
  std::vector<Symbol> out;
  if (word.find_first_of(" \t") != std::string_view::npos) {
    out = split_ws(word);
  } else {
    std::size_t pos = 0;
    while (pos < word.size()) {
      std::size_t best = 0;
      for (const auto& a : tm.input_alphabet) {
        if (a.size() > best && word.compare(pos, a.size(), a) == 0) best = a.size();
      }
      if (best == 0) {
        throw ValidationError("input '" + std::string(word) + "' has no symbol of the input alphabet at offset " +
                              std::to_string(pos));
      }
      out.emplace_back(word.substr(pos, best));
      pos += best;
    }
  }
  for (const auto& s : out) {
    if (!tm.is_input_symbol(s)) throw ValidationError("input symbol '" + s + "' is not in the input alphabet");
  }
  return out;
}

Configuration Configuration::canonical(const Symbol& blank) const {
  Configuration c = *this;
  while (c.right.size() > 1 && c.right.back() == blank) c.right.pop_back();
  if (c.right.empty()) c.right.push_back(blank);
  return c;
}

std::string Configuration::render() const {
  std::string out;
  for (const auto& s : left) out += s;
  if (out.empty()) out = "-";
  out += ' ';
  out += state;
  out += ' ';
  for (const auto& s : right) out += s;
  return out;
}

std::string Configuration::compact() const {
  std::string out;
  for (const auto& s : left) out += s;
  out += state;
  for (const auto& s : right) out += s;
  return out;
}

std::string to_string(HaltStatus status) {
  switch (status) {
    case HaltStatus::kAccepted: return "accepted";
    case HaltStatus::kStuck: return "stuck";
    case HaltStatus::kBudgetExhausted: return "budget-exhausted";
  }
  return "unknown";
}

std::string render_history(const History& history) {
  std::string out;
  for (const auto& c : history.configurations) {
    out += c.render();
    out += '\n';
  }
  return out;
}

History simulate(const TuringMachine& tm, const std::vector<Symbol>& input, std::size_t max_steps) {
  for (const auto& s : input) {
    if (!tm.is_input_symbol(s)) throw ValidationError("input symbol '" + s + "' is not in the input alphabet");
  }
  std::vector<Symbol> tape = input;
  if (tape.empty()) tape.push_back(tm.blank);
  std::size_t head = 0;
  std::string state = tm.start;

  auto snapshot = [&] {
    Configuration c;
    c.left.assign(tape.begin(), tape.begin() + static_cast<std::ptrdiff_t>(head));
    c.state = state;
    c.right.assign(tape.begin() + static_cast<std::ptrdiff_t>(head), tape.end());
    return c.canonical(tm.blank);
  };

  History history;
  history.configurations.push_back(snapshot());
  for (std::size_t steps = 0;; ++steps) {
    if (tm.is_final(state)) {
      history.status = HaltStatus::kAccepted;
      return history;
    }
    if (steps == max_steps) {
      history.status = HaltStatus::kBudgetExhausted;
      return history;
    }
    const Action* action = tm.lookup(state, tape[head]);
    if (!action) {
      history.status = HaltStatus::kStuck;
      return history;
    }
    tape[head] = action->write;
    state = action->next;
    if (action->move == Move::kLeft) {
      if (head == 0) {
        history.status = HaltStatus::kStuck;
        throw BoundaryViolation("head moved left of cell 0 in state " + state, std::move(history));
      }
      --head;
    } else {
      ++head;
      if (head == tape.size()) tape.push_back(tm.blank);
    }
    history.configurations.push_back(snapshot());
  }
}

History map_symbol(const History& history, const Symbol& from, const Symbol& to, const Symbol& blank) {
  History out = history;
  for (auto& c : out.configurations) {
    std::replace(c.left.begin(), c.left.end(), from, to);
    std::replace(c.right.begin(), c.right.end(), from, to);
    c = c.canonical(blank);
  }
  return out;
}

}  // namespace slsvm::tm
