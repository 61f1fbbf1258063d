#pragma once

#include <string>

#include "specmc/action.hpp"
#include "specmc/machine_state.hpp"

namespace specmc {

enum class Arch { SC, TSO };

// Identifies one architecture: a reordering predicate plus the forwarding
// transformer used by the prefix rule.  Open for extension with further
// relations.
struct MemoryModel {
  Arch arch = Arch::SC;

  std::string name() const { return arch == Arch::SC ? "sc" : "tso"; }
};

// May `later` execute before `earlier`?  The predicate needs to know which
// names are globals (everything else is a register), hence the AddressMap.
//
// Tau reorders with everything.  Cache flushes and cache-membership guards
// are fully ordered both ways.  A cache fetch of x hoists over assignments
// and guards not involving x, but never past a fence or a store to x.
// Under SC all remaining pairs are ordered; under TSO loads may come
// before stores to distinct locations.
bool reorderable(const Action& earlier, const Action& later,
                 const MemoryModel& m, const AddressMap& amap);

// Store forwarding: if `earlier` assigns a literal to a location that
// `later` reads, substitute the value; otherwise return `later` unchanged.
Action forward(const Action& earlier, const Action& later,
               const AddressMap& amap);

// Classification helpers shared with the semantics.
bool is_store(const Action& a, const AddressMap& amap);    // global target
bool is_load_like(const Action& a, const AddressMap& amap);  // reads a global
std::set<std::string> globals_read(const Action& a, const AddressMap& amap);

}  // namespace specmc
