#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slsvm/turing_machine.hpp"

namespace slsvm::mpcp {

// Tile strings are sequences of interned symbol ids. A u32string keeps the
// prefix and concatenation operations cheap; the ids mean nothing outside
// the TileSet that produced them.
using Word = std::u32string;
using TileIndex = std::uint32_t;
using TileSeq = std::vector<TileIndex>;

struct Tile {
  Word top;
  Word bottom;

  friend bool operator==(const Tile&, const Tile&) = default;
};

// Compiled encoding of (M, w). tiles[0] is the initial pair; tiles[1..|F|]
// are the closing pairs, one per final state in name order.
struct TileSet {
  std::vector<Tile> tiles;
  std::size_t count = 0;

  std::vector<std::string> names;  // symbol id -> name
  std::vector<bool> state_symbol;  // symbol id -> is a state
  std::vector<bool> final_symbol;  // symbol id -> is a final state
  char32_t separator = 0;
  tm::Symbol blank;
  std::vector<TileIndex> closing;

  const Tile& operator[](std::size_t i) const { return tiles.at(i); }
  bool is_closing(TileIndex i) const;
  std::optional<char32_t> id(const std::string& name) const;
  // Space-separated symbol names.
  std::string spell(const Word& w) const;
};

// Tape alphabet the tile families range over: Γ in name order, minus the
// pseudo-blank when no transition writes it (it can then never reach the tape).
std::vector<tm::Symbol> effective_alphabet(const tm::TuringMachine& tm);

// Throws UnnormalizedMachine if some transition writes the blank.
TileSet compile(const tm::TuringMachine& tm, const std::vector<tm::Symbol>& input);

// Closed-form size of compile(tm, w), independent of w.
std::size_t expected_tile_count(const tm::TuringMachine& tm);

// "tiles: <count>" then one "top|bottom" line per tile.
std::string render_tiles(const TileSet& set);

struct View {
  Word a;  // tops concatenated
  Word b;  // bottoms concatenated
};

View view(const TileSet& set, std::span<const TileIndex> seq);

// a is a prefix of b (a = b included).
bool is_partial_solution(const TileSet& set, std::span<const TileIndex> seq);
bool is_complete(const TileSet& set, std::span<const TileIndex> seq);

// b[|a|:] when a is a prefix of b.
std::optional<Word> remainder(const TileSet& set, std::span<const TileIndex> seq);
// Remainder after appending `tile` to a sequence whose remainder is r.
std::optional<Word> advance(const Word& r, const Tile& tile);

// A tile sequence is viable when it is a partial solution that is either
// complete or can take at least one more tile (index >= 1) without breaking
// the prefix property. This is what "correct" means to every universal
// heuristic: the bare prefix test accepts copy tiles that run into a state
// no tile can consume.
bool viable_remainder(const TileSet& set, const Word& r);
bool is_viable(const TileSet& set, std::span<const TileIndex> seq);

// The single index i >= 1 with partial + [i] viable; nullopt when none.
// Throws NoExtension if partial is complete, MultipleExtensions if several
// tiles qualify, PreconditionViolation if partial is not a partial solution.
std::optional<TileIndex> unique_extension(const TileSet& set, std::span<const TileIndex> partial);

// Shortest solution of at most max_len tiles starting with tile 0, found by
// breadth-first search with the bare prefix test.
std::optional<TileSeq> brute_force_mpcp(const TileSet& set, std::size_t max_len);

// Parses one separator-free segment "alpha q beta" of a bottom string.
// Throws MalformedSegment unless it holds exactly one state symbol.
tm::Configuration decode_configuration(const TileSet& set, const Word& segment);

}  // namespace slsvm::mpcp
