#include "slsvm/mpcp.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_set>

#include "slsvm/errors.hpp"

namespace slsvm::mpcp {

namespace {

class Builder {
 public:
  explicit Builder(TileSet& set) : set_(set) {
    set_.names.emplace_back();  // id 0 unused
    set_.state_symbol.push_back(false);
    set_.final_symbol.push_back(false);
  }

  char32_t intern(const std::string& name, bool state = false, bool final = false) {
    auto [it, inserted] = ids_.emplace(name, static_cast<char32_t>(set_.names.size()));
    if (inserted) {
      set_.names.push_back(name);
      set_.state_symbol.push_back(state);
      set_.final_symbol.push_back(final);
    }
    return it->second;
  }

  char32_t at(const std::string& name) const { return ids_.at(name); }

  void add(Word top, Word bottom) { set_.tiles.push_back(Tile{std::move(top), std::move(bottom)}); }

 private:
  TileSet& set_;
  std::map<std::string, char32_t> ids_;
};

bool starts_with(const Word& s, const Word& prefix) {
  return s.size() >= prefix.size() && s.compare(0, prefix.size(), prefix) == 0;
}

struct RuleCounts {
  std::size_t right = 0, left = 0, right_on_blank = 0, left_on_blank = 0;
};

// Transitions that can contribute tiles: not out of a final state (the
// machine has halted there) and reading a symbol that can be on the tape.
template <class Fn>
void for_each_live_rule(const tm::TuringMachine& tm, const std::vector<tm::Symbol>& gamma, Fn&& fn) {
  for (const auto& [key, action] : tm.delta) {
    if (tm.is_final(key.first)) continue;
    if (std::find(gamma.begin(), gamma.end(), key.second) == gamma.end()) continue;
    fn(key.first, key.second, action);
  }
}

}  // namespace

bool TileSet::is_closing(TileIndex i) const { return std::find(closing.begin(), closing.end(), i) != closing.end(); }

std::optional<char32_t> TileSet::id(const std::string& name) const {
  for (std::size_t i = 1; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<char32_t>(i);
  }
  return std::nullopt;
}

std::string TileSet::spell(const Word& w) const {
  std::string out;
  for (char32_t c : w) {
    if (!out.empty()) out += ' ';
    out += names.at(c);
  }
  return out;
}

std::vector<tm::Symbol> effective_alphabet(const tm::TuringMachine& tm) {
  std::vector<tm::Symbol> gamma;
  for (const auto& x : tm.tape_alphabet) {
    if (tm.pseudo_blank && x == *tm.pseudo_blank &&
        std::none_of(tm.delta.begin(), tm.delta.end(), [&](const auto& r) { return r.second.write == x; })) {
      continue;
    }
    gamma.push_back(x);
  }
  std::sort(gamma.begin(), gamma.end());
  return gamma;
}

std::size_t expected_tile_count(const tm::TuringMachine& tm) {
  const auto gamma = effective_alphabet(tm);
  const std::size_t g = gamma.size();
  const std::size_t f = tm.finals.size();
  RuleCounts c;
  for_each_live_rule(tm, gamma, [&](const std::string&, const tm::Symbol& read, const tm::Action& a) {
    const bool on_blank = read == tm.blank;
    if (a.move == tm::Move::kRight) {
      ++c.right;
      c.right_on_blank += on_blank;
    } else {
      ++c.left;
      c.left_on_blank += on_blank;
    }
  });
  // f == 0 drops the closing family entirely: 2 + ... + (f - 1) nets to 1.
  return 1 + f + (g + 1) + c.right + g * c.left + c.right_on_blank + g * c.left_on_blank + f * (2 * g + g * g);
}

TileSet compile(const tm::TuringMachine& tm, const std::vector<tm::Symbol>& input) {
  if (!tm.writes_no_blank()) {
    throw UnnormalizedMachine("machine writes the blank; normalize it before compiling");
  }
  for (const auto& s : input) {
    if (!tm.is_input_symbol(s)) throw ValidationError("input symbol '" + s + "' is not in the input alphabet");
  }

  TileSet set;
  set.blank = tm.blank;
  Builder b(set);
  const auto gamma = effective_alphabet(tm);
  std::vector<std::string> states = tm.states;
  std::sort(states.begin(), states.end());

  const char32_t sep = b.intern("#");
  set.separator = sep;
  for (const auto& x : gamma) b.intern(x);
  for (const auto& q : states) b.intern(q, true, tm.is_final(q));

  auto w = [&](std::initializer_list<std::string> names) {
    Word out;
    for (const auto& n : names) out.push_back(b.at(n));
    return out;
  };

  {
    Word bottom{sep, b.at(tm.start)};
    if (input.empty()) {
      bottom.push_back(b.at(tm.blank));
    } else {
      for (const auto& s : input) bottom.push_back(b.at(s));
    }
    bottom.push_back(sep);
    b.add(Word{sep}, std::move(bottom));
  }

  for (const auto& qf : tm.finals) {
    set.closing.push_back(static_cast<TileIndex>(set.tiles.size()));
    b.add(w({qf, "#", "#"}), w({"#"}));
  }

  for (const auto& x : gamma) b.add(w({x}), w({x}));
  b.add(w({"#"}), w({"#"}));

  for_each_live_rule(tm, gamma, [&](const std::string& q, const tm::Symbol& x, const tm::Action& a) {
    const auto& p = a.next;
    const auto& y = a.write;
    const bool on_blank = x == tm.blank;
    if (a.move == tm::Move::kRight) {
      b.add(w({q, x}), w({y, p}));
      if (on_blank) b.add(w({q, "#"}), w({y, p, "#"}));
    } else {
      for (const auto& z : gamma) b.add(w({z, q, x}), w({p, z, y}));
      if (on_blank) {
        for (const auto& z : gamma) b.add(w({z, q, "#"}), w({p, z, y, "#"}));
      }
    }
  });

  for (const auto& qf : tm.finals) {
    for (const auto& x : gamma) b.add(w({x, qf}), w({qf}));
    for (const auto& y : gamma) b.add(w({qf, y}), w({qf}));
    for (const auto& x : gamma) {
      for (const auto& y : gamma) b.add(w({x, qf, y}), w({qf}));
    }
  }

  set.count = set.tiles.size();
  return set;
}

std::string render_tiles(const TileSet& set) {
  std::string out = "tiles: " + std::to_string(set.count) + "\n";
  for (const auto& t : set.tiles) out += set.spell(t.top) + "|" + set.spell(t.bottom) + "\n";
  return out;
}

View view(const TileSet& set, std::span<const TileIndex> seq) {
  View v;
  for (TileIndex i : seq) {
    v.a += set[i].top;
    v.b += set[i].bottom;
  }
  return v;
}

bool is_partial_solution(const TileSet& set, std::span<const TileIndex> seq) {
  const View v = view(set, seq);
  return starts_with(v.b, v.a);
}

bool is_complete(const TileSet& set, std::span<const TileIndex> seq) {
  const View v = view(set, seq);
  return v.a == v.b;
}

std::optional<Word> remainder(const TileSet& set, std::span<const TileIndex> seq) {
  View v = view(set, seq);
  if (!starts_with(v.b, v.a)) return std::nullopt;
  return v.b.substr(v.a.size());
}

namespace {

// top is a prefix of r + bottom
bool fits(const Word& r, const Tile& tile) {
  const std::size_t n = tile.top.size();
  const std::size_t from_r = std::min(n, r.size());
  if (r.compare(0, from_r, tile.top, 0, from_r) != 0) return false;
  if (n <= r.size()) return true;
  const std::size_t rest = n - r.size();
  return tile.bottom.size() >= rest && tile.bottom.compare(0, rest, tile.top, r.size(), rest) == 0;
}

}  // namespace

std::optional<Word> advance(const Word& r, const Tile& tile) {
  if (!fits(r, tile)) return std::nullopt;
  const std::size_t n = tile.top.size();
  if (n > r.size()) return tile.bottom.substr(n - r.size());
  return r.substr(n) + tile.bottom;
}

bool viable_remainder(const TileSet& set, const Word& r) {
  if (r.empty()) return true;
  for (std::size_t i = 1; i < set.count; ++i) {
    if (fits(r, set.tiles[i])) return true;
  }
  return false;
}

bool is_viable(const TileSet& set, std::span<const TileIndex> seq) {
  auto r = remainder(set, seq);
  return r && viable_remainder(set, *r);
}

std::optional<TileIndex> unique_extension(const TileSet& set, std::span<const TileIndex> partial) {
  auto r = remainder(set, partial);
  if (!r) throw PreconditionViolation("unique_extension: not a partial solution");
  if (r->empty()) throw NoExtension("sequence is already a complete solution");
  std::optional<TileIndex> found;
  for (std::size_t i = 1; i < set.count; ++i) {
    auto next = mpcp::advance(*r, set.tiles[i]);
    if (!next || !viable_remainder(set, *next)) continue;
    if (found) {
      throw MultipleExtensions("tiles " + std::to_string(*found) + " and " + std::to_string(i) +
                               " both extend the partial solution");
    }
    found = static_cast<TileIndex>(i);
  }
  return found;
}

std::optional<TileSeq> brute_force_mpcp(const TileSet& set, std::size_t max_len) {
  if (max_len == 0 || set.count == 0) return std::nullopt;
  struct Node {
    Word r;
    std::size_t parent;
    TileIndex tile;
    std::size_t depth;
  };
  std::vector<Node> nodes;
  auto path = [&](std::size_t at) {
    TileSeq seq;
    for (std::size_t i = at;; i = nodes[i].parent) {
      seq.push_back(nodes[i].tile);
      if (i == 0) break;
    }
    std::reverse(seq.begin(), seq.end());
    return seq;
  };

  auto first = mpcp::advance(Word{}, set.tiles[0]);
  if (!first) return std::nullopt;
  nodes.push_back(Node{*first, 0, 0, 1});
  if (first->empty()) return TileSeq{0};

  std::unordered_set<Word> seen{*first};
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const std::size_t at = queue.front();
    queue.pop_front();
    if (nodes[at].depth >= max_len) continue;
    for (std::size_t i = 1; i < set.count; ++i) {
      auto next = mpcp::advance(nodes[at].r, set.tiles[i]);
      if (!next || !seen.insert(*next).second) continue;
      nodes.push_back(Node{std::move(*next), at, static_cast<TileIndex>(i), nodes[at].depth + 1});
      if (nodes.back().r.empty()) return path(nodes.size() - 1);
      queue.push_back(nodes.size() - 1);
    }
  }
  return std::nullopt;
}

tm::Configuration decode_configuration(const TileSet& set, const Word& segment) {
  tm::Configuration c;
  std::size_t states = 0;
  for (char32_t s : segment) {
    if (s == set.separator || s >= set.names.size()) throw MalformedSegment("segment holds a separator");
    if (set.state_symbol[s]) {
      ++states;
      c.state = set.names[s];
    } else if (states == 0) {
      c.left.push_back(set.names[s]);
    } else {
      c.right.push_back(set.names[s]);
    }
  }
  if (states != 1) {
    throw MalformedSegment("segment '" + set.spell(segment) + "' holds " + std::to_string(states) +
                           " state symbols");
  }
  return c.canonical(set.blank);
}

}  // namespace slsvm::mpcp
