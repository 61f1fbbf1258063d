#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>

#include "specmc/action.hpp"

namespace specmc {

struct Command;
using CmdPtr = std::shared_ptr<const Command>;

using RegMap = std::map<std::string, Value>;
using StoreMap = std::map<LocKey, Value>;

// Program tree.  Prefix with strict=false is reorderable sequencing (later
// instructions may execute early subject to the memory model); strict=true
// forbids reordering past the head.  Seq is surface sugar removed by
// normalize().  Speculate/Interrupt/Buffer/Locals are created by the
// semantics (Locals also wraps each process at top level, held separately
// in ProcState).
struct Command {
  struct Skip {};
  struct Prefix {
    Action act;
    CmdPtr rest;
    bool strict = false;
  };
  struct Choice {
    CmdPtr left;
    CmdPtr right;
  };
  struct If {
    ExprPtr cond;
    CmdPtr then_cmd;
    CmdPtr else_cmd;
  };
  struct While {
    ExprPtr cond;
    CmdPtr body;
    CmdPtr cont;      // continuation after loop exit (Seq elimination)
    int unfolds = 0;  // unfold count so far, checked against the loop bound
  };
  struct Seq {
    CmdPtr first;
    CmdPtr second;
    bool strict = false;  // `;;` join: last action of first joins strictly
  };
  struct Speculate {
    CmdPtr body;
  };
  struct Interrupt {
    CmdPtr pre;   // may partially execute, then is discarded
    CmdPtr cont;  // may take over at any point
  };
  struct Buffer {
    StoreMap store;
    CmdPtr body;
  };
  struct Locals {
    RegMap regs;
    CmdPtr body;
  };

  using Node = std::variant<Skip, Prefix, Choice, If, While, Seq, Speculate,
                            Interrupt, Buffer, Locals>;

  Node node;
  std::size_t hash;

  explicit Command(Node n);
};

CmdPtr skip();
CmdPtr prefix(Action a, CmdPtr rest);
CmdPtr strict_prefix(Action a, CmdPtr rest);
CmdPtr choice(CmdPtr l, CmdPtr r);
CmdPtr if_cmd(ExprPtr cond, CmdPtr t, CmdPtr e);
CmdPtr while_cmd(ExprPtr cond, CmdPtr body, CmdPtr cont = nullptr,
                 int unfolds = 0);
CmdPtr seq(CmdPtr first, CmdPtr second, bool strict = false);
CmdPtr speculate(CmdPtr body);
CmdPtr interrupt(CmdPtr pre, CmdPtr cont);
CmdPtr buffer(StoreMap store, CmdPtr body);
CmdPtr locals(RegMap regs, CmdPtr body);

bool cmd_equal(const CmdPtr& a, const CmdPtr& b);
bool is_skip(const CmdPtr& c);

// Eliminate Seq nodes.  Action sequences and branch structure are
// preserved; sequencing distributes into Choice/If branches and into the
// While continuation.  Idempotent.
CmdPtr normalize(const CmdPtr& c);

// Debug rendering of the full tree, including semantics-created wrappers.
std::string to_string(const CmdPtr& c);

}  // namespace specmc
