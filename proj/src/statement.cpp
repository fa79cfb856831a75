#include "slsvm/statement.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace slsvm {

Statement Statement::seq(Statement first, Statement second) {
  Statement s(Kind::kSeq);
  s.first_ = std::make_shared<const Statement>(std::move(first));
  s.second_ = std::make_shared<const Statement>(std::move(second));
  return s;
}

Statement Statement::instance(std::string name) {
  if (name.empty()) throw std::invalid_argument("instance statement needs a name");
  Statement s(Kind::kInstance);
  s.name_ = std::move(name);
  return s;
}

Statement Statement::chain(std::initializer_list<Statement> parts) {
  if (parts.size() == 0) throw std::invalid_argument("chain: no statements");
  std::vector<Statement> items(parts);
  Statement result = items.back();
  for (auto it = items.rbegin() + 1; it != items.rend(); ++it) result = seq(*it, std::move(result));
  return result;
}

const Statement& Statement::first() const {
  if (!first_) throw std::logic_error("first() on a non-sequence statement");
  return *first_;
}

const Statement& Statement::second() const {
  if (!second_) throw std::logic_error("second() on a non-sequence statement");
  return *second_;
}

const Statement& Statement::leftmost() const {
  const Statement* s = this;
  while (s->is_seq()) s = s->first_.get();
  return *s;
}

std::string Statement::head() const {
  const Statement& leaf = leftmost();
  switch (leaf.kind_) {
    case Kind::kSetProb: return "setProb(p)";
    case Kind::kGenerate: return "generate";
    case Kind::kNextGen: return "nextGen";
    case Kind::kEvaluate: return "evaluate";
    case Kind::kStop: return "stop";
    case Kind::kCompute: return "compute(p)";
    case Kind::kInstance: return leaf.name_;
    case Kind::kSeq: break;
  }
  throw std::logic_error("unreachable statement kind");
}

std::string Statement::render() const {
  if (!is_seq()) return head();
  std::string lhs = first_->render();
  if (first_->is_seq()) lhs = "(" + lhs + ")";
  return lhs + "; " + second_->render();
}

Statement Statement::normalized() const {
  if (!is_seq()) return *this;
  // Flatten the leaves left to right, then rebuild right-nested.
  std::vector<const Statement*> leaves;
  std::vector<const Statement*> todo{this};
  while (!todo.empty()) {
    const Statement* s = todo.back();
    todo.pop_back();
    if (s->is_seq()) {
      todo.push_back(s->second_.get());
      todo.push_back(s->first_.get());
    } else {
      leaves.push_back(s);
    }
  }
  Statement result = *leaves.back();
  for (auto it = leaves.rbegin() + 1; it != leaves.rend(); ++it) result = seq(**it, std::move(result));
  return result;
}

bool operator==(const Statement& lhs, const Statement& rhs) {
  if (lhs.kind_ != rhs.kind_) return false;
  if (lhs.kind_ == Statement::Kind::kInstance) return lhs.name_ == rhs.name_;
  if (lhs.kind_ != Statement::Kind::kSeq) return true;
  return *lhs.first_ == *rhs.first_ && *lhs.second_ == *rhs.second_;
}

}  // namespace slsvm
