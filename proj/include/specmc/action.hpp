#pragma once

#include <optional>
#include <string>
#include <variant>

#include "specmc/expr.hpp"

namespace specmc {

// An atomic instruction.  Transitions are labelled with these; Tau is the
// internal step and never appears in recorded traces.
struct Action {
  struct Assign {
    LocRef target;
    ExprPtr value;
  };
  struct Guard {
    ExprPtr cond;
    // Set when this guard is the promoted form of a load (r := x becomes
    // [x = v]).  Load guards fire silently at the system level; load_ref is
    // the resolved location reference the load reads, used by the
    // speculation rule to emit the matching cache fetch.
    bool is_load = false;
    ExprPtr load_ref;  // Var or Elem with literal index; null unless is_load
  };
  struct Fence {};  // speculation barrier
  struct Fetch {
    LocRef loc;
  };
  struct Flush {};
  struct Tau {};

  using Node = std::variant<Assign, Guard, Fence, Fetch, Flush, Tau>;

  Node node;
  std::size_t hash;

  explicit Action(Node n);
};

Action act_assign(LocRef target, ExprPtr value);
Action act_guard(ExprPtr cond);
Action act_load_guard(ExprPtr cond, ExprPtr load_ref);
Action act_fence();
Action act_fetch(LocRef loc);
Action act_flush();
Action act_tau();

bool action_equal(const Action& a, const Action& b);
std::string to_string(const Action& a);

inline bool is_tau(const Action& a) {
  return std::holds_alternative<Action::Tau>(a.node);
}

// Silent at the system boundary: Tau and promoted load guards.
bool is_silent(const Action& a);

}  // namespace specmc
