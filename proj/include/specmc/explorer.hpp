#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specmc/semantics.hpp"

namespace specmc {

struct TraceStep {
  int pid;
  Action act;
};
using Trace = std::vector<TraceStep>;

// One terminating run: its visible (tau-compressed) trace and the final
// state.
struct RunResult {
  Trace trace;
  MemoryImage finals;
  std::vector<RegMap> regs;  // per process
};

struct ExploreOptions {
  MemoryModel model;
  SpecMode mode = SpecMode::WrongBranch;
  LocalsPolicy locals_policy = LocalsPolicy::Copy;
  Bounds bounds;
  int jobs = 1;  // 1 = deterministic single-context mode
};

struct ExploreResult {
  std::vector<RunResult> runs;  // deduplicated, canonically ordered
  ExhaustFlags flags;
};

ExploreResult explore(const Program& prog, const ExploreOptions& opts);

struct Verdict {
  enum class Kind { Holds, Fails, BoundExhausted };
  Kind kind = Kind::Holds;
  std::optional<RunResult> witness;
  std::string detail;

  bool holds() const { return kind == Kind::Holds; }
};

// Trace refinement: Holds iff every terminating trace of `concrete` is a
// trace of `abstract`.  Fails carries the offending concrete run.
Verdict refines(const Program& abstract, const Program& concrete,
                const ExploreOptions& opts);

// Reachability of `predicate` over final global and register valuations.
// A satisfying run is reported as Fails with the (BFS-shortest) witness.
Verdict check_reach(const Program& prog, const ExprPtr& predicate,
                    const ExploreOptions& opts);

// Replays a recorded trace through step(): true iff some path emits exactly
// these visible labels (with silent steps in between) and terminates.
bool replay(const Program& prog, const Trace& trace,
            const ExploreOptions& opts);

std::string to_string(const TraceStep& step, const Program& prog);
std::string trace_key(const Trace& t);  // canonical pid-qualified encoding

// Evaluate a reach predicate over a terminated configuration.  Names may
// be globals, `proc.reg` qualified registers, or bare register names when
// unique across processes.
Value eval_final(const ExprPtr& e, const Program& prog,
                 const MemoryImage& finals, const std::vector<RegMap>& regs);

}  // namespace specmc
