#pragma once

#include <initializer_list>
#include <memory>
#include <string>
#include <string_view>

namespace slsvm {

// Program text of an SLS run:
//
//   S ::= S1; S2 | setProb(p) | generate | nextGen | evaluate | stop
//       | compute(p) | <instance statement>
//
// Instance statements (select, cross, mutate, simulate, divert, aim, move)
// are identified by name and resolved against the suite at run time. The
// problem expression p is a property of the run, not of the statement tree.
// Nodes are immutable and shared, so copying a Statement is cheap.
class Statement {
 public:
  enum class Kind { kSeq, kSetProb, kGenerate, kNextGen, kEvaluate, kStop, kCompute, kInstance };

  static Statement seq(Statement first, Statement second);
  static Statement set_prob() { return Statement(Kind::kSetProb); }
  static Statement generate() { return Statement(Kind::kGenerate); }
  static Statement next_gen() { return Statement(Kind::kNextGen); }
  static Statement evaluate() { return Statement(Kind::kEvaluate); }
  static Statement stop() { return Statement(Kind::kStop); }
  static Statement compute() { return Statement(Kind::kCompute); }
  static Statement instance(std::string name);

  // seq(a, seq(b, c)) for a list of at least one statement.
  static Statement chain(std::initializer_list<Statement> parts);

  Kind kind() const noexcept { return kind_; }
  bool is_seq() const noexcept { return kind_ == Kind::kSeq; }
  const Statement& first() const;
  const Statement& second() const;
  const std::string& name() const noexcept { return name_; }

  // Leftmost leaf: the statement that executes next.
  const Statement& leftmost() const;
  // Leaf rendering ("generate", "compute(p)", "mutate", ...) of the leftmost leaf.
  std::string head() const;
  // Full rendering, ';'-separated, parenthesizing left-nested sequences.
  std::string render() const;

  // Right-associated form: seq(seq(a, b), c) becomes seq(a, seq(b, c)).
  Statement normalized() const;

  friend bool operator==(const Statement& lhs, const Statement& rhs);

 private:
  explicit Statement(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::string name_;
  std::shared_ptr<const Statement> first_;
  std::shared_ptr<const Statement> second_;
};

}  // namespace slsvm
