#include "slsvm/trace.hpp"

namespace slsvm {

std::string render_trace(const RunTrace& trace) {
  std::string out;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& entry = trace[i];
    out += std::to_string(i);
    out += '\t';
    out += entry.rule;
    out += '\t';
    out += entry.statement;
    out += '\t';
    out += entry.digest;
    out += '\n';
  }
  return out;
}

}  // namespace slsvm
