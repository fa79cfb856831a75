#pragma once

#include <string>
#include <vector>

namespace slsvm {

// One application of a non-structural transition rule. The structural
// [comp1]/[comp2] rules that thread a step through `;` are not recorded;
// their premise is.
struct RuleApplication {
  std::string rule;       // "compute", "set-problem", "stop^ff", "mutation", ...
  std::string statement;  // head of the statement the rule rewrote
  std::string digest;     // FPW rendering after the rule, "-" when not an integer

  friend bool operator==(const RuleApplication&, const RuleApplication&) = default;
};

using RunTrace = std::vector<RuleApplication>;

// One line per application: "<index>\t<rule>\t<statement>\t<digest>\n",
// indices starting at 0.
std::string render_trace(const RunTrace& trace);

}  // namespace slsvm
