#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "specmc/system.hpp"

namespace specmc::gen {

using Rng = std::mt19937_64;

struct CommandOptions {
  int max_actions = 5;
  std::vector<std::string> registers = {"r1", "r2"};
  std::vector<std::string> globals = {"x", "y", "z"};
  Value max_value = 3;
  bool allow_guards = true;
  bool allow_loads = true;
};

// A random prefix chain of register computations, loads, stores and
// (optionally) guards.  No speculation constructs.
CmdPtr random_command(Rng& rng, const CommandOptions& opts);

struct ProgramOptions {
  int max_actions = 8;      // across all processes
  int max_processes = 2;
  int max_conditionals = 1;
  Value max_value = 3;
};

// A random whole system over a fixed declaration set, with at most the
// given number of conditionals spread over its processes.
Program random_program(Rng& rng, const ProgramOptions& opts);

// Fixed declaration environment used for command-level checks: globals
// x, y, z, b (scalars) and registers r1, r2.
Program wrap_command(const CmdPtr& c, RegMap regs = {{"r1", 0}, {"r2", 0}},
                     std::vector<std::pair<std::string, Value>> globals = {
                         {"x", 0}, {"y", 0}, {"z", 42}, {"b", 0}});

}  // namespace specmc::gen
