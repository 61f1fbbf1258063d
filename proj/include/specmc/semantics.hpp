#pragma once

#include <cstddef>
#include <vector>

#include "specmc/memory_model.hpp"
#include "specmc/system.hpp"

namespace specmc {

// How conditionals expand.
//  Off            — plain guarded choice, no speculation.
//  WrongBranch    — the branch not taken may be speculated (default).
//  BothBranches   — the speculated body chooses between both branches.
//  AnnotatedLoads — no speculation nodes; every load in a branch is
//                   annotated to emit a cache fetch first.
enum class SpecMode { Off, WrongBranch, BothBranches, AnnotatedLoads };

// Register valuation given to a transient context: a copy of the current
// registers, or all zeroes.
enum class LocalsPolicy { Copy, Zero };

struct Bounds {
  int max_depth = 20000;         // steps along any one path
  int loop_bound = 64;           // unfoldings per loop occurrence
  int spec_depth = 2;            // nested speculation contexts
  std::size_t max_states = 1u << 21;  // dedup table cap
};

// Set when exploration was cut short; results are then a lower
// approximation and callers must report BoundExhausted.
struct ExhaustFlags {
  bool depth = false;
  bool loop = false;
  bool spec_depth = false;
  bool states = false;

  bool any() const { return depth || loop || spec_depth || states; }
};

struct Label {
  int pid;
  Action act;

  bool silent() const { return is_silent(act); }
};

struct StepContext {
  const AddressMap* amap = nullptr;
  MemoryModel model;
  SpecMode mode = SpecMode::WrongBranch;
  LocalsPolicy locals_policy = LocalsPolicy::Copy;
  Bounds bounds;
  int value_bits = kDefaultValueBits;
};

struct Successor {
  Label label;
  Configuration cfg;
  int rule_id = 0;
};

// All successors of cfg licensed by the transition rules, in canonical
// order (rule id, then structural hash).  Configurations with no
// successors are blocked, not errors.  flags may be null.
std::vector<Successor> step(const Configuration& cfg, const StepContext& ctx,
                            ExhaustFlags* flags);

bool terminated(const Configuration& cfg);

// The transient context for speculating c: an empty store buffer around a
// speculative register copy.
CmdPtr trans_ctx(const CmdPtr& c, const RegMap& current_regs,
                 LocalsPolicy policy);

// Expansion of `if b then c1 else c2` under the given mode.  current_regs
// seeds the transient contexts; depth_ok=false forces the Off shape (the
// speculation-depth bound was hit).
CmdPtr expand_if(const ExprPtr& b, const CmdPtr& c1, const CmdPtr& c2,
                 SpecMode mode, const RegMap& current_regs,
                 LocalsPolicy policy, bool depth_ok = true);

}  // namespace specmc
