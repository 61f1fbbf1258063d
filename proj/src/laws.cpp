#include "specmc/laws.hpp"

#include <sstream>

#include "specmc/gen.hpp"

namespace specmc {

namespace {

struct Checker {
  ExploreOptions opts;
  LawResult result;

  void check(const Program& abstract, const Program& concrete,
             const std::string& what) {
    result.instances += 1;
    Verdict v = refines(abstract, concrete, opts);
    if (!v.holds()) {
      result.failures += 1;
      if (result.counterexamples.size() < 3) {
        std::ostringstream out;
        out << what << ": " << v.detail;
        if (v.witness) out << " [" << trace_key(v.witness->trace) << "]";
        result.counterexamples.push_back(out.str());
      }
    }
  }
};

// c -a-> c'  implies  c ref= a . c'.
void law_step_to_prefix(Checker& ck, const CmdPtr& c) {
  Program base = gen::wrap_command(c);
  StepContext ctx{&base.amap,           ck.opts.model,  ck.opts.mode,
                  ck.opts.locals_policy, ck.opts.bounds, base.value_bits};
  Configuration cfg = initial_configuration(base);
  for (const auto& s : step(cfg, ctx, nullptr)) {
    Program rhs = base;
    rhs.procs[0].regs = s.cfg.procs[0].regs;
    rhs.procs[0].code = strict_prefix(s.label.act, s.cfg.procs[0].cmd);
    ck.check(base, rhs, "step-to-prefix on " + to_string(c));
  }
}

void law_choice(Checker& ck, const CmdPtr& c1, const CmdPtr& c2) {
  Program abstract = gen::wrap_command(choice(c1, c2));
  ck.check(abstract, gen::wrap_command(c1),
           "choice left of " + to_string(c1));
  ck.check(abstract, gen::wrap_command(c2),
           "choice right of " + to_string(c2));
}

void law_prefix_weaken(Checker& ck, const Action& a, const CmdPtr& c) {
  ck.check(gen::wrap_command(prefix(a, c)),
           gen::wrap_command(strict_prefix(a, c)),
           "prefix-weaken on " + to_string(a));
}

CmdPtr subst_cmd(const CmdPtr& c, const RegMap& env) {
  if (const auto* p = std::get_if<Command::Prefix>(&c->node)) {
    Action a = p->act;
    if (const auto* as = std::get_if<Action::Assign>(&a.node)) {
      a = act_assign(LocRef{as->target.name,
                            as->target.index
                                ? subst_vars(as->target.index, env)
                                : nullptr},
                     subst_vars(as->value, env));
    } else if (const auto* g = std::get_if<Action::Guard>(&a.node)) {
      a = act_guard(subst_vars(g->cond, env));
    }
    CmdPtr rest = subst_cmd(p->rest, env);
    return p->strict ? strict_prefix(std::move(a), rest)
                     : prefix(std::move(a), rest);
  }
  return c;
}

// locals sigma in c  ref=  c[sigma], for c that reads but never writes the
// registers of sigma.
void law_locals_resolve(Checker& ck, const RegMap& sigma, const CmdPtr& c) {
  Program abstract = gen::wrap_command(locals(sigma, c), RegMap{});
  Program concrete = gen::wrap_command(subst_cmd(c, sigma), RegMap{});
  ck.check(abstract, concrete, "locals-resolve on " + to_string(c));
}

void law_interrupt_after_one(Checker& ck, const Action& a, const CmdPtr& c1,
                             const CmdPtr& c2) {
  ck.check(gen::wrap_command(interrupt(strict_prefix(a, c1), c2)),
           gen::wrap_command(strict_prefix(a, c2)),
           "interrupt-after-one on " + to_string(a));
}

// interrupt (spec <r1:=x ; r2:=y>) c  ref=  fetch x . fetch y . c
void law_spec_two_loads(Checker& ck, const std::string& x,
                        const std::string& y, const CmdPtr& c) {
  RegMap regs{{"r1", 0}, {"r2", 0}};
  CmdPtr loads = prefix(act_assign(LocRef{"r1", nullptr}, var(x)),
                        prefix(act_assign(LocRef{"r2", nullptr}, var(y)),
                               skip()));
  CmdPtr abstract_cmd =
      interrupt(speculate(trans_ctx(loads, regs, LocalsPolicy::Copy)), c);
  CmdPtr concrete_cmd = strict_prefix(
      act_fetch(LocRef{x, nullptr}),
      strict_prefix(act_fetch(LocRef{y, nullptr}), c));
  ck.check(gen::wrap_command(abstract_cmd, regs),
           gen::wrap_command(concrete_cmd, regs),
           "spec-two-loads over " + x + "," + y);
}

// if b then (r1:=x ; r2:=y) else c  ref=  fetch x ; fetch y ; [!b] ; c
void law_if_two_loads(Checker& ck, const std::string& x, const std::string& y,
                      Value bval, const CmdPtr& c) {
  RegMap regs{{"r1", 0}, {"r2", 0}};
  auto globals = std::vector<std::pair<std::string, Value>>{
      {"x", 1}, {"y", 2}, {"z", 42}, {"b", bval}};
  CmdPtr loads = prefix(act_assign(LocRef{"r1", nullptr}, var(x)),
                        prefix(act_assign(LocRef{"r2", nullptr}, var(y)),
                               skip()));
  CmdPtr abstract_cmd = if_cmd(var("b"), loads, c);
  CmdPtr concrete_cmd = prefix(
      act_fetch(LocRef{x, nullptr}),
      prefix(act_fetch(LocRef{y, nullptr}),
             prefix(act_guard(unary(UnOp::Not, var("b"))), c)));
  ck.check(gen::wrap_command(abstract_cmd, regs, globals),
           gen::wrap_command(concrete_cmd, regs, globals),
           "if-two-loads over " + x + "," + y);
}

}  // namespace

LawReport law_suite(const MemoryModel& model, SpecMode mode,
                    const Bounds& bounds, std::uint64_t seed,
                    int random_per_law) {
  ExploreOptions opts;
  opts.model = model;
  opts.mode = mode;
  opts.bounds = bounds;

  gen::Rng rng(seed);
  gen::CommandOptions small;
  small.max_actions = 5;

  LawReport report;

  {  // step-to-prefix
    Checker ck{opts, {"step-to-prefix"}};
    law_step_to_prefix(
        ck, prefix(act_assign(LocRef{"x", nullptr}, lit(1)),
                   prefix(act_assign(LocRef{"r1", nullptr}, var("y")),
                          skip())));
    for (int i = 0; i < random_per_law; ++i) {
      law_step_to_prefix(ck, gen::random_command(rng, small));
    }
    report.laws.push_back(std::move(ck.result));
  }

  {  // choice
    Checker ck{opts, {"choice"}};
    law_choice(ck, prefix(act_assign(LocRef{"x", nullptr}, lit(1)), skip()),
               prefix(act_assign(LocRef{"y", nullptr}, lit(2)), skip()));
    for (int i = 0; i < random_per_law; ++i) {
      law_choice(ck, gen::random_command(rng, small),
                 gen::random_command(rng, small));
    }
    report.laws.push_back(std::move(ck.result));
  }

  {  // prefix-weaken
    Checker ck{opts, {"prefix-weaken"}};
    law_prefix_weaken(
        ck, act_assign(LocRef{"x", nullptr}, lit(1)),
        prefix(act_assign(LocRef{"r1", nullptr}, var("y")), skip()));
    for (int i = 0; i < random_per_law; ++i) {
      gen::CommandOptions one = small;
      one.max_actions = 1;
      CmdPtr head = gen::random_command(rng, one);
      const auto& p = std::get<Command::Prefix>(head->node);
      law_prefix_weaken(ck, p.act, gen::random_command(rng, small));
    }
    report.laws.push_back(std::move(ck.result));
  }

  {  // locals-resolve
    Checker ck{opts, {"locals-resolve"}};
    law_locals_resolve(
        ck, RegMap{{"r", 1}},
        prefix(act_assign(LocRef{"x", nullptr}, var("r")), skip()));
    for (int i = 0; i < random_per_law; ++i) {
      RegMap sigma{{"r1", static_cast<Value>(rng() % 4)},
                   {"r2", static_cast<Value>(rng() % 4)}};
      // Stores and true guards over the bound registers only.
      CmdPtr c = skip();
      int n = 1 + static_cast<int>(rng() % 4);
      for (int k = 0; k < n; ++k) {
        const char* g = rng() % 2 ? "x" : "y";
        const char* r = rng() % 2 ? "r1" : "r2";
        Action a = rng() % 3 == 0
                       ? act_guard(binary(BinOp::Le, var(r), lit(3)))
                       : act_assign(LocRef{g, nullptr}, var(r));
        c = rng() % 4 == 0 ? strict_prefix(std::move(a), c)
                           : prefix(std::move(a), c);
      }
      law_locals_resolve(ck, sigma, c);
    }
    report.laws.push_back(std::move(ck.result));
  }

  {  // interrupt-after-one
    Checker ck{opts, {"interrupt-after-one"}};
    law_interrupt_after_one(
        ck, act_assign(LocRef{"x", nullptr}, lit(1)),
        prefix(act_assign(LocRef{"y", nullptr}, lit(2)), skip()),
        prefix(act_assign(LocRef{"z", nullptr}, lit(3)), skip()));
    for (int i = 0; i < random_per_law; ++i) {
      gen::CommandOptions one = small;
      one.max_actions = 1;
      CmdPtr head = gen::random_command(rng, one);
      const auto& p = std::get<Command::Prefix>(head->node);
      gen::CommandOptions tiny = small;
      tiny.max_actions = 2;
      law_interrupt_after_one(ck, p.act, gen::random_command(rng, tiny),
                              gen::random_command(rng, tiny));
    }
    report.laws.push_back(std::move(ck.result));
  }

  {  // spec-two-loads
    Checker ck{opts, {"spec-two-loads"}};
    law_spec_two_loads(ck, "x", "y",
                       prefix(act_assign(LocRef{"z", nullptr}, lit(1)),
                              skip()));
    for (int i = 0; i < random_per_law; ++i) {
      const char* x = rng() % 2 ? "x" : "z";
      gen::CommandOptions tiny = small;
      tiny.max_actions = 2;
      law_spec_two_loads(ck, x, "y", gen::random_command(rng, tiny));
    }
    report.laws.push_back(std::move(ck.result));
  }

  {  // if-two-loads: characterises speculative expansion of conditionals
    ExploreOptions spec_opts = opts;
    spec_opts.mode = SpecMode::WrongBranch;
    Checker ck{spec_opts, {"if-two-loads"}};
    law_if_two_loads(ck, "x", "y", 0,
                     prefix(act_assign(LocRef{"z", nullptr}, lit(7)), skip()));
    for (int i = 0; i < random_per_law; ++i) {
      gen::CommandOptions tiny = small;
      tiny.max_actions = 2;
      tiny.allow_guards = false;
      Value bval = rng() % 4 == 0 ? 1 : 0;
      law_if_two_loads(ck, "x", "y", bval, gen::random_command(rng, tiny));
    }
    report.laws.push_back(std::move(ck.result));
  }

  return report;
}

std::string to_string(const LawReport& report) {
  std::ostringstream out;
  for (const auto& l : report.laws) {
    out << (l.passed() ? "PASS" : "FAIL") << " " << l.law << " ("
        << l.instances << " instances";
    if (l.failures) out << ", " << l.failures << " failures";
    out << ")\n";
    for (const auto& cex : l.counterexamples) {
      out << "    counterexample: " << cex << "\n";
    }
  }
  return out.str();
}

}  // namespace specmc
