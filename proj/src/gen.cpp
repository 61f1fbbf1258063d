#include "specmc/gen.hpp"

#include <algorithm>

namespace specmc::gen {

namespace {

Value pick_value(Rng& rng, Value max_value) {
  return static_cast<Value>(rng() % static_cast<std::uint64_t>(max_value + 1));
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& xs) {
  return xs[rng() % xs.size()];
}

// A small register/literal expression.
ExprPtr reg_expr(Rng& rng, const CommandOptions& opts) {
  switch (rng() % 3) {
    case 0:
      return lit(pick_value(rng, opts.max_value));
    case 1:
      return var(pick(rng, opts.registers));
    default:
      return binary(BinOp::Add, var(pick(rng, opts.registers)),
                    lit(pick_value(rng, opts.max_value)));
  }
}

Action random_action(Rng& rng, const CommandOptions& opts) {
  for (;;) {
    switch (rng() % 4) {
      case 0:  // register computation
        return act_assign(LocRef{pick(rng, opts.registers), nullptr},
                          reg_expr(rng, opts));
      case 1:  // load
        if (!opts.allow_loads) continue;
        return act_assign(LocRef{pick(rng, opts.registers), nullptr},
                          var(pick(rng, opts.globals)));
      case 2:  // store
        return act_assign(LocRef{pick(rng, opts.globals), nullptr},
                          rng() % 2 ? lit(pick_value(rng, opts.max_value))
                                    : var(pick(rng, opts.registers)));
      default:  // guard (usually satisfiable: v <= max)
        if (!opts.allow_guards) continue;
        return act_guard(binary(
            rng() % 2 ? BinOp::Le : BinOp::Lt,
            rng() % 2 ? var(pick(rng, opts.registers))
                      : lit(pick_value(rng, opts.max_value)),
            lit(opts.max_value)));
    }
  }
}

}  // namespace

CmdPtr random_command(Rng& rng, const CommandOptions& opts) {
  int n = 1 + static_cast<int>(rng() % opts.max_actions);
  CmdPtr c = skip();
  for (int i = 0; i < n; ++i) {
    Action a = random_action(rng, opts);
    c = rng() % 4 == 0 ? strict_prefix(std::move(a), c)
                       : prefix(std::move(a), c);
  }
  return c;
}

Program wrap_command(const CmdPtr& c, RegMap regs,
                     std::vector<std::pair<std::string, Value>> globals) {
  std::vector<GlobalDecl> decls;
  for (auto& [name, v] : globals) {
    GlobalDecl d;
    d.name = name;
    d.init = {v};
    decls.push_back(std::move(d));
  }
  ProcessDecl p;
  p.name = "P1";
  p.regs = std::move(regs);
  p.code = normalize(c);
  return Program::build(std::move(decls), {std::move(p)});
}

Program random_program(Rng& rng, const ProgramOptions& opts) {
  std::vector<GlobalDecl> decls;
  for (const char* g : {"x", "y"}) {
    GlobalDecl d;
    d.name = g;
    d.init = {pick_value(rng, opts.max_value)};
    decls.push_back(std::move(d));
  }

  int nprocs = 1 + static_cast<int>(rng() % opts.max_processes);
  int action_budget = opts.max_actions;
  int cond_budget = opts.max_conditionals;

  std::vector<ProcessDecl> procs;
  for (int i = 0; i < nprocs; ++i) {
    CommandOptions copts;
    copts.registers = {"r1", "r2"};
    copts.globals = {"x", "y"};
    copts.max_value = opts.max_value;

    int mine = i + 1 == nprocs ? action_budget
                               : 1 + static_cast<int>(rng() % std::max(
                                         1, action_budget - (nprocs - i - 1)));
    action_budget -= mine;

    CmdPtr body;
    if (cond_budget > 0 && rng() % 2 == 0 && mine >= 3) {
      cond_budget -= 1;
      copts.max_actions = std::max(1, (mine - 1) / 2);
      CmdPtr then_cmd = random_command(rng, copts);
      CmdPtr else_cmd = rng() % 3 == 0 ? skip() : random_command(rng, copts);
      ExprPtr cond =
          rng() % 2 ? binary(BinOp::Eq, var("x"),
                             lit(pick_value(rng, opts.max_value)))
                    : binary(BinOp::Lt, var("r1"), lit(opts.max_value + 1));
      body = if_cmd(cond, then_cmd, else_cmd);
      if (rng() % 2) {
        copts.max_actions = 1;
        body = seq(random_command(rng, copts), body);
      }
    } else {
      copts.max_actions = std::max(1, mine);
      body = random_command(rng, copts);
    }

    ProcessDecl p;
    p.name = "P" + std::to_string(i + 1);
    p.regs = {{"r1", 0}, {"r2", 0}};
    p.code = normalize(body);
    procs.push_back(std::move(p));
  }
  return Program::build(std::move(decls), std::move(procs));
}

}  // namespace specmc::gen
