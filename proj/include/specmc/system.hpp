#pragma once

#include <string>
#include <vector>

#include "specmc/command.hpp"
#include "specmc/machine_state.hpp"

namespace specmc {

// A process: a register valuation (total on the registers its code uses)
// wrapping a command.
struct ProcessDecl {
  std::string name;
  RegMap regs;
  CmdPtr code;
};

// A whole system: global declarations (one shared memory image including
// the cache) plus the parallel composition of processes.
struct Program {
  std::vector<GlobalDecl> globals;
  std::vector<ProcessDecl> procs;
  AddressMap amap;
  MemoryImage initial;
  int value_bits = kDefaultValueBits;

  static Program build(std::vector<GlobalDecl> globals,
                       std::vector<ProcessDecl> procs,
                       int value_bits = kDefaultValueBits);
};

// Runtime snapshot of one process: its top-level register state and the
// remaining command tree.
struct ProcState {
  RegMap regs;
  CmdPtr cmd;
};

struct Configuration {
  MemoryImage mem;
  std::vector<ProcState> procs;

  std::size_t hash() const;
  bool operator==(const Configuration& o) const;
};

Configuration initial_configuration(const Program& prog);

// Evaluate e over registers and the global image.  Cache-membership tests
// consult the cache set.  Throws Diagnostic for unbound names or addresses
// outside the memory image.
Value eval(const ExprPtr& e, const RegMap& regs, const MemoryImage& img,
           const AddressMap& amap, int value_bits = kDefaultValueBits);

}  // namespace specmc
