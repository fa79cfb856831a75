#include "corpus.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace slsvm::testing {

std::string data_path(const std::string& relative) { return std::string(SLSVM_TEST_DATA) + "/" + relative; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

tm::TuringMachine load_machine(const std::string& name) { return tm::load_tm(data_path("machines/" + name + ".tm")); }

namespace {

CorpusEntry entry(const std::string& name, const std::string& input) {
  CorpusEntry e{name, input, load_machine(name), {}};
  e.word = tm::tokenize_input(e.machine, input);
  return e;
}

}  // namespace

std::vector<CorpusEntry> accepting_corpus() {
  return {entry("accept0", ""), entry("m_acc", "1"), entry("succ", "11"), entry("parity", "0110"),
          entry("astarbstar", "aabb")};
}

std::vector<CorpusEntry> full_corpus() {
  auto c = accepting_corpus();
  c.push_back(entry("parity", "01"));  // odd: stuck on the blank in state o
  c.push_back(entry("loop", ""));
  c.push_back(entry("stuck", "0"));
  c.push_back(entry("eraser", "a111"));
  return c;
}

std::string sweeper_text(int k) {
  if (k < 2 || k % 2 != 0) throw std::invalid_argument("sweeper needs an even k >= 2");
  std::string states = "qf";
  std::string rules;
  for (int i = 1; i <= k; ++i) {
    const std::string s = "s" + std::to_string(i);
    const std::string next = "s" + std::to_string(i + 1);
    states += " " + s;
    if (i % 2 == 1) {
      rules += "rule: " + s + " a -> " + s + " a R\n";
      rules += "rule: " + s + " 1 -> " + s + " 1 R\n";
      rules += "rule: " + s + " b -> " + next + " b L\n";
    } else {
      rules += "rule: " + s + " 1 -> " + s + " 1 L\n";
      rules += "rule: " + s + " a -> " + (i == k ? std::string("qf") : next) + " a R\n";
    }
  }
  return "states: " + states +
         "\ninput_alphabet: a 1 b\ntape_alphabet: a 1 b _\nblank: _\nstart: s1\naccept: qf\n" + rules;
}

}  // namespace slsvm::testing
