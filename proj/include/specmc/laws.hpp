#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specmc/explorer.hpp"

namespace specmc {

struct LawResult {
  std::string law;
  int instances = 0;
  int failures = 0;
  std::vector<std::string> counterexamples;  // first few only

  bool passed() const { return failures == 0; }
};

struct LawReport {
  std::vector<LawResult> laws;

  bool all_pass() const {
    for (const auto& l : laws)
      if (!l.passed()) return false;
    return true;
  }
};

// Checks the refinement laws on their catalog instances plus
// `random_per_law` randomly generated small commands, via refines():
//   step-to-prefix   c -a-> c'        implies  c ref= a . c'
//   choice           c1 |~| c2  ref=  c1  (and c2)
//   prefix-weaken    a ; c  ref=  a . c
//   locals-resolve   locals sigma in c  ref=  c with sigma substituted
//   interrupt-after-one   interrupt (a . c1) c2  ref=  a . c2
//   spec-two-loads   interrupt (spec <r1:=x ; r2:=y>) c  ref=
//                        fetch x . fetch y . c
//   if-two-loads     if b then (r1:=x ; r2:=y) else c  ref=
//                        fetch x ; fetch y ; [!b] ; c
LawReport law_suite(const MemoryModel& model, SpecMode mode,
                    const Bounds& bounds, std::uint64_t seed = 1,
                    int random_per_law = 100);

std::string to_string(const LawReport& report);

}  // namespace specmc
