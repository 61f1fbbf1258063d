#pragma once

#include <string>
#include <vector>

#include "specmc/explorer.hpp"

namespace specmc {

// One expected outcome of a scenario under a particular model and mode.
struct Expectation {
  Arch arch;
  SpecMode mode;
  std::string reach;      // predicate text; empty = plain exploration
  bool expect_witness = false;
  std::string note;
};

// A built-in fixture.  `text` is a complete program in the concrete
// syntax; the System is obtained by parsing it, so fixtures stay data.
struct Scenario {
  std::string name;
  std::string text;
  std::vector<std::string> secrets;  // declared secret locations
  std::vector<Expectation> expected;
  std::string notes;
};

// The out-of-bounds read attack: a victim with a bounds-checked double
// load, aliased so the index `chi` reaches the secret, and a prober that
// walks a shared array testing cache membership.  Sequential composition
// by default; `parallel` splits victim and prober into two processes
// (experimental).  `fenced` inserts a fence at the branch head.
Scenario spectre_v1(Value probe_size, Value secret, Value chi,
                    bool fenced = false, bool parallel = false);

// The two-branch conditional whose not-taken branch stores a global,
// updates a register and loads z=42: speculation exposes `fetch z` before
// the [!b] guard while leaving all data state untouched.
Scenario worked_example();

// Store-buffering litmus: r1=r2=0 reachable under TSO only.
Scenario litmus_sb();

std::vector<Scenario> all_scenarios();

}  // namespace specmc
