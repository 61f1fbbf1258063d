#include "specmc/semantics.hpp"

#include <algorithm>
#include <stdexcept>

namespace specmc {

namespace {

// Rule identifiers, used for the canonical successor order.
enum Rule {
  kPrefixHead = 1,
  kPrefixReorder,
  kChoiceLeft,
  kChoiceRight,
  kWhileUnfold,
  kIfExpand,
  kSeqStep,
  kSeqSkip,
  kLocalsStep,
  kLocalsCollapse,
  kBufferStore,
  kBufferServe,
  kBufferHideFetch,
  kBufferPromote,
  kBufferCollapse,
  kSpecLoad,
  kSpecSilent,
  kSpecFetch,
  kSpecDone,
  kInterruptPre,
  kInterruptSwitch,
};

struct CmdSucc {
  Action label;
  CmdPtr cmd;
  int rule;
};

struct Env {
  const StepContext* ctx;
  const MemoryImage* mem;
  const RegMap* regs;  // innermost locals wrapper
  std::vector<const StoreMap*> buffers;  // outermost first
  int spec_depth = 0;
  ExhaustFlags* flags;

  const AddressMap& amap() const { return *ctx->amap; }
};

std::vector<CmdSucc> cmd_step(const CmdPtr& c, const Env& env);

// Current value of a resolved location: the innermost enclosing transient
// buffer holding it, else the global image.
Value lookthrough(const Env& env, const LocKey& loc) {
  for (auto it = env.buffers.rbegin(); it != env.buffers.rend(); ++it) {
    auto found = (*it)->find(loc);
    if (found != (*it)->end()) return found->second;
  }
  Addr a = env.amap().addr_of(loc);
  return env.mem->data.at(static_cast<std::size_t>(a));
}

// Evaluate an expression whose registers are already substituted, reading
// globals through the buffer stack.  Cache tests consult the shared cache.
Value resolve_value(const ExprPtr& e, const Env& env) {
  struct Eval {
    const Env& env;
    Value ev(const ExprPtr& x) const { return std::visit(*this, x->node); }
    Value operator()(const Expr::Lit& n) const { return n.value; }
    Value operator()(const Expr::Var& n) const {
      if (!env.amap().is_global(n.name)) {
        throw Diagnostic("unbound variable '" + n.name + "'");
      }
      return lookthrough(env, LocKey{n.name, std::nullopt});
    }
    Value operator()(const Expr::Elem& n) const {
      return lookthrough(env, LocKey{n.array, ev(n.index)});
    }
    Value operator()(const Expr::Unary& n) const {
      Value v = ev(n.operand);
      if (n.op == UnOp::Not) return v == 0 ? 1 : 0;
      return truncate_value(static_cast<Value>(-static_cast<std::uint64_t>(v)),
                            env.ctx->value_bits);
    }
    Value operator()(const Expr::Binary& n) const {
      Value l = ev(n.lhs), r = ev(n.rhs);
      const int bits = env.ctx->value_bits;
      switch (n.op) {
        case BinOp::Add:
          return truncate_value(static_cast<Value>(
                                    static_cast<std::uint64_t>(l) +
                                    static_cast<std::uint64_t>(r)),
                                bits);
        case BinOp::Sub:
          return truncate_value(static_cast<Value>(
                                    static_cast<std::uint64_t>(l) -
                                    static_cast<std::uint64_t>(r)),
                                bits);
        case BinOp::Lt:
          return l < r ? 1 : 0;
        case BinOp::Le:
          return l <= r ? 1 : 0;
        case BinOp::Eq:
          return l == r ? 1 : 0;
        case BinOp::Ne:
          return l != r ? 1 : 0;
        case BinOp::And:
          return (l != 0 && r != 0) ? 1 : 0;
      }
      throw Diagnostic("unknown operator");
    }
    Value operator()(const Expr::InCache& n) const {
      std::optional<Value> idx;
      if (n.loc.index) idx = ev(n.loc.index);
      return cache_query(*env.mem, env.amap().addr_of(n.loc.name, idx)) ? 1
                                                                        : 0;
    }
  };
  return Eval{env}.ev(e);
}

// The distinct global locations an already register-substituted expression
// reads, with indices resolved.
void collect_load_locs(const ExprPtr& e, const Env& env,
                       std::vector<LocKey>& out) {
  struct Walk {
    const Env& env;
    std::vector<LocKey>& out;
    void add(LocKey k) const {
      if (std::find(out.begin(), out.end(), k) == out.end())
        out.push_back(std::move(k));
    }
    void operator()(const Expr::Lit&) const {}
    void operator()(const Expr::Var& n) const {
      if (env.amap().is_global(n.name)) add(LocKey{n.name, std::nullopt});
    }
    void operator()(const Expr::Elem& n) const {
      add(LocKey{n.array, resolve_value(n.index, env)});
    }
    void operator()(const Expr::Unary& n) const {
      std::visit(*this, n.operand->node);
    }
    void operator()(const Expr::Binary& n) const {
      std::visit(*this, n.lhs->node);
      std::visit(*this, n.rhs->node);
    }
    void operator()(const Expr::InCache&) const {
      // A membership test reads the cache, not data memory.
    }
  };
  std::visit(Walk{env, out}, e->node);
}

ExprPtr loc_expr(const LocKey& loc) {
  return loc.index ? elem(loc.name, lit(*loc.index)) : var(loc.name);
}

LocRef loc_ref(const LocKey& loc) {
  return LocRef{loc.name, loc.index ? lit(*loc.index) : nullptr};
}

LocKey key_of_ref(const LocRef& ref) {
  LocKey k{ref.name, std::nullopt};
  if (ref.index) {
    const auto* l = std::get_if<Expr::Lit>(&ref.index->node);
    if (l == nullptr) {
      throw std::logic_error("location index not resolved: " + to_string(ref));
    }
    k.index = l->value;
  }
  return k;
}

// The resolved location a load guard reads (its load_ref is a Var or an
// Elem with a literal index by construction).
LocKey key_of_load_ref(const ExprPtr& ref) {
  if (const auto* v = std::get_if<Expr::Var>(&ref->node)) {
    return LocKey{v->name, std::nullopt};
  }
  if (const auto* e = std::get_if<Expr::Elem>(&ref->node)) {
    if (const auto* l = std::get_if<Expr::Lit>(&e->index->node)) {
      return LocKey{e->array, l->value};
    }
  }
  throw std::logic_error("malformed load reference: " + to_string(ref));
}

// The value a load guard is bound to ([loc = v] has v on the right).
std::optional<Value> bound_value(const Action::Guard& g) {
  if (const auto* b = std::get_if<Expr::Binary>(&g.cond->node)) {
    if (b->op == BinOp::Eq) {
      if (const auto* l = std::get_if<Expr::Lit>(&b->rhs->node)) {
        return l->value;
      }
    }
  }
  return std::nullopt;
}

// The locals transformation applied to one inner step:
//  - register computations become silent updates of the valuation,
//  - loads promote as value-binding guards, binding the value the location
//    currently holds (through enclosing buffers, else the global image),
//  - stores promote with registers and remaining global reads resolved,
//  - guards promote with registers substituted,
//  - fetch indices resolve; other labels pass through.
struct LocalsOut {
  Action label;
  RegMap regs;
  CmdPtr cmd;
  int rule;
};

std::vector<LocalsOut> locals_apply(const RegMap& regs,
                                    const std::vector<CmdSucc>& inner,
                                    const Env& env) {
  std::vector<LocalsOut> out;
  out.reserve(inner.size());
  for (const auto& s : inner) {
    if (const auto* as = std::get_if<Action::Assign>(&s.label.node)) {
      if (regs.count(as->target.name)) {
        // Register target.
        ExprPtr rhs = subst_vars(as->value, regs);
        if (is_ground(rhs)) {
          RegMap regs2 = regs;
          regs2[as->target.name] = eval_ground(rhs, env.ctx->value_bits);
          out.push_back({act_tau(), std::move(regs2), s.cmd, s.rule});
          continue;
        }
        // A load.  Bind the location's current value and promote the
        // corresponding guard.
        std::vector<LocKey> locs;
        collect_load_locs(rhs, env, locs);
        if (locs.size() != 1) {
          throw Diagnostic("load '" + to_string(s.label) +
                           "' reads " + std::to_string(locs.size()) +
                           " global locations; exactly one is supported");
        }
        const LocKey& loc = locs.front();
        Value bound = lookthrough(env, loc);
        // Value assigned to the register: rhs with the location resolved.
        ExprPtr resolved = subst_loc(rhs, loc, bound);
        // Array indices inside rhs may still reference globals; resolve
        // them the same way the location itself was found.
        Value regv = is_ground(resolved)
                         ? eval_ground(resolved, env.ctx->value_bits)
                         : resolve_value(resolved, env);
        RegMap regs2 = regs;
        regs2[as->target.name] = regv;
        ExprPtr ref = loc_expr(loc);
        Action guard = act_load_guard(binary(BinOp::Eq, ref, lit(bound)), ref);
        out.push_back({std::move(guard), std::move(regs2), s.cmd, s.rule});
        continue;
      }
      // Global store: resolve registers, the index, and any remaining
      // global reads, so the promoted label carries a literal.
      ExprPtr rhs = subst_vars(as->value, regs);
      Value v = is_ground(rhs) ? eval_ground(rhs, env.ctx->value_bits)
                               : resolve_value(rhs, env);
      LocRef target{as->target.name, nullptr};
      if (as->target.index) {
        ExprPtr idx = subst_vars(as->target.index, regs);
        Value iv = is_ground(idx) ? eval_ground(idx, env.ctx->value_bits)
                                  : resolve_value(idx, env);
        target.index = lit(iv);
      }
      out.push_back(
          {act_assign(std::move(target), lit(v)), regs, s.cmd, s.rule});
      continue;
    }
    if (const auto* g = std::get_if<Action::Guard>(&s.label.node)) {
      ExprPtr cond = subst_vars(g->cond, regs);
      Action promoted = g->is_load
                            ? act_load_guard(cond, g->load_ref)
                            : act_guard(cond);
      out.push_back({std::move(promoted), regs, s.cmd, s.rule});
      continue;
    }
    if (const auto* f = std::get_if<Action::Fetch>(&s.label.node)) {
      LocRef loc{f->loc.name, nullptr};
      if (f->loc.index) {
        ExprPtr idx = subst_vars(f->loc.index, regs);
        Value iv = is_ground(idx) ? eval_ground(idx, env.ctx->value_bits)
                                  : resolve_value(idx, env);
        loc.index = lit(iv);
      }
      out.push_back({act_fetch(std::move(loc)), regs, s.cmd, s.rule});
      continue;
    }
    // Tau, fence, flush.
    out.push_back({s.label, regs, s.cmd, s.rule});
  }
  return out;
}

CmdPtr annotate_loads(const CmdPtr& c, const RegMap& regs);

std::vector<CmdSucc> cmd_step(const CmdPtr& c, const Env& env) {
  struct Stepper {
    const CmdPtr& c;
    const Env& env;

    std::vector<CmdSucc> operator()(const Command::Skip&) const { return {}; }

    std::vector<CmdSucc> operator()(const Command::Prefix& n) const {
      std::vector<CmdSucc> out;
      out.push_back({n.act, n.rest, kPrefixHead});
      if (!n.strict) {
        for (const auto& s : cmd_step(n.rest, env)) {
          Action fwd = forward(n.act, s.label, env.amap());
          if (reorderable(n.act, fwd, env.ctx->model, env.amap())) {
            out.push_back({std::move(fwd),
                           prefix(n.act, s.cmd), kPrefixReorder});
          }
        }
      }
      return out;
    }

    std::vector<CmdSucc> operator()(const Command::Choice& n) const {
      return {{act_tau(), n.left, kChoiceLeft},
              {act_tau(), n.right, kChoiceRight}};
    }

    std::vector<CmdSucc> operator()(const Command::If& n) const {
      bool depth_ok = env.spec_depth < env.ctx->bounds.spec_depth;
      if (!depth_ok &&
          (env.ctx->mode == SpecMode::WrongBranch ||
           env.ctx->mode == SpecMode::BothBranches)) {
        if (env.flags) env.flags->spec_depth = true;
      }
      CmdPtr expanded =
          expand_if(n.cond, n.then_cmd, n.else_cmd, env.ctx->mode, *env.regs,
                    env.ctx->locals_policy, depth_ok);
      return {{act_tau(), std::move(expanded), kIfExpand}};
    }

    std::vector<CmdSucc> operator()(const Command::While& n) const {
      if (n.unfolds >= env.ctx->bounds.loop_bound) {
        if (env.flags) env.flags->loop = true;
        return {};
      }
      CmdPtr again = while_cmd(n.cond, n.body, n.cont, n.unfolds + 1);
      CmdPtr unrolled = normalize(seq(n.body, std::move(again)));
      return {{act_tau(), if_cmd(n.cond, std::move(unrolled), n.cont),
               kWhileUnfold}};
    }

    std::vector<CmdSucc> operator()(const Command::Seq& n) const {
      // Surface sugar; stepped head-only so that un-normalized trees stay
      // executable for comparison.  No reordering across the boundary.
      if (is_skip(n.first)) return {{act_tau(), n.second, kSeqSkip}};
      std::vector<CmdSucc> out;
      for (const auto& s : cmd_step(n.first, env)) {
        out.push_back({s.label, seq(s.cmd, n.second, n.strict), kSeqStep});
      }
      return out;
    }

    std::vector<CmdSucc> operator()(const Command::Speculate& n) const {
      if (is_skip(n.body)) return {{act_tau(), skip(), kSpecDone}};
      Env inner_env = env;
      inner_env.spec_depth += 1;
      std::vector<CmdSucc> out;
      for (const auto& s : cmd_step(n.body, inner_env)) {
        if (const auto* g = std::get_if<Action::Guard>(&s.label.node);
            g != nullptr && g->is_load) {
          // A speculated load has an initial side effect on the cache; the
          // load itself is delayed until after the fetch.
          LocKey loc = key_of_load_ref(g->load_ref);
          out.push_back({act_fetch(loc_ref(loc)),
                         prefix(s.label, speculate(s.cmd)), kSpecLoad});
          continue;
        }
        if (is_tau(s.label)) {
          out.push_back({act_tau(), speculate(s.cmd), kSpecSilent});
          continue;
        }
        if (std::holds_alternative<Action::Fetch>(s.label.node)) {
          out.push_back({s.label, speculate(s.cmd), kSpecFetch});
          continue;
        }
        // No rule: fences, flushes, plain guards and anything else block
        // the speculation here (it stays interruptible from outside).
      }
      return out;
    }

    std::vector<CmdSucc> operator()(const Command::Interrupt& n) const {
      std::vector<CmdSucc> out;
      for (const auto& s : cmd_step(n.pre, env)) {
        out.push_back({s.label, interrupt(s.cmd, n.cont), kInterruptPre});
      }
      for (const auto& s : cmd_step(n.cont, env)) {
        out.push_back({s.label, s.cmd, kInterruptSwitch});
      }
      return out;
    }

    std::vector<CmdSucc> operator()(const Command::Buffer& n) const {
      if (is_skip(n.body)) return {{act_tau(), skip(), kBufferCollapse}};
      Env inner_env = env;
      inner_env.buffers.push_back(&n.store);
      std::vector<CmdSucc> out;
      for (const auto& s : cmd_step(n.body, inner_env)) {
        if (const auto* as = std::get_if<Action::Assign>(&s.label.node)) {
          const auto* v = std::get_if<Expr::Lit>(&as->value->node);
          if (v == nullptr) {
            throw std::logic_error("unresolved store reached a buffer: " +
                                   to_string(s.label));
          }
          StoreMap store = n.store;
          store[key_of_ref(as->target)] = v->value;
          out.push_back(
              {act_tau(), buffer(std::move(store), s.cmd), kBufferStore});
          continue;
        }
        if (const auto* g = std::get_if<Action::Guard>(&s.label.node);
            g != nullptr && g->is_load) {
          LocKey loc = key_of_load_ref(g->load_ref);
          auto held = n.store.find(loc);
          if (held != n.store.end()) {
            // Serviced by the buffer when the recorded value matches; a
            // stale binding blocks (still interruptible from outside).
            std::optional<Value> bound = bound_value(*g);
            if (bound && *bound == held->second) {
              out.push_back({act_tau(), buffer(n.store, s.cmd), kBufferServe});
            }
            continue;
          }
          out.push_back({s.label, buffer(n.store, s.cmd), kBufferPromote});
          continue;
        }
        if (const auto* f = std::get_if<Action::Fetch>(&s.label.node)) {
          if (n.store.count(key_of_ref(f->loc))) {
            out.push_back(
                {act_tau(), buffer(n.store, s.cmd), kBufferHideFetch});
            continue;
          }
        }
        // Tau, fences, flushes, plain guards, unshadowed fetches.
        out.push_back({s.label, buffer(n.store, s.cmd), kBufferPromote});
      }
      return out;
    }

    std::vector<CmdSucc> operator()(const Command::Locals& n) const {
      if (is_skip(n.body)) return {{act_tau(), skip(), kLocalsCollapse}};
      Env inner_env = env;
      inner_env.regs = &n.regs;
      std::vector<CmdSucc> out;
      for (auto& o :
           locals_apply(n.regs, cmd_step(n.body, inner_env), inner_env)) {
        out.push_back({std::move(o.label),
                       locals(std::move(o.regs), o.cmd), kLocalsStep});
      }
      return out;
    }
  };
  return std::visit(Stepper{c, env}, c->node);
}

// AnnotatedLoads: prepend a cache fetch to every load in a branch body.
// Nested conditionals are annotated when they expand themselves.
CmdPtr annotate_loads(const CmdPtr& c, const RegMap& regs) {
  struct Annotate {
    const CmdPtr& c;
    const RegMap& regs;

    void collect_refs(const ExprPtr& e, std::vector<LocRef>& out) const {
      struct Walk {
        const RegMap& regs;
        std::vector<LocRef>& out;
        void operator()(const Expr::Lit&) const {}
        void operator()(const Expr::Var& n) const {
          if (!regs.count(n.name)) out.push_back(LocRef{n.name, nullptr});
        }
        void operator()(const Expr::Elem& n) const {
          out.push_back(LocRef{n.array, n.index});
        }
        void operator()(const Expr::Unary& n) const {
          std::visit(*this, n.operand->node);
        }
        void operator()(const Expr::Binary& n) const {
          std::visit(*this, n.lhs->node);
          std::visit(*this, n.rhs->node);
        }
        void operator()(const Expr::InCache&) const {}
      };
      std::visit(Walk{regs, out}, e->node);
    }

    CmdPtr operator()(const Command::Skip&) const { return c; }
    CmdPtr operator()(const Command::Prefix& n) const {
      CmdPtr rest = annotate_loads(n.rest, regs);
      CmdPtr result = std::make_shared<Command>(
          Command::Prefix{n.act, rest, n.strict});
      if (const auto* as = std::get_if<Action::Assign>(&n.act.node)) {
        if (regs.count(as->target.name)) {
          std::vector<LocRef> refs;
          collect_refs(as->value, refs);
          for (auto it = refs.rbegin(); it != refs.rend(); ++it) {
            result = prefix(act_fetch(*it), result);
          }
        }
      }
      return result;
    }
    CmdPtr operator()(const Command::Choice& n) const {
      return choice(annotate_loads(n.left, regs),
                    annotate_loads(n.right, regs));
    }
    CmdPtr operator()(const Command::If&) const { return c; }
    CmdPtr operator()(const Command::While&) const { return c; }
    CmdPtr operator()(const Command::Seq& n) const {
      return seq(annotate_loads(n.first, regs),
                 annotate_loads(n.second, regs), n.strict);
    }
    CmdPtr operator()(const Command::Speculate&) const { return c; }
    CmdPtr operator()(const Command::Interrupt&) const { return c; }
    CmdPtr operator()(const Command::Buffer&) const { return c; }
    CmdPtr operator()(const Command::Locals&) const { return c; }
  };
  return std::visit(Annotate{c, regs}, c->node);
}

}  // namespace

CmdPtr trans_ctx(const CmdPtr& c, const RegMap& current_regs,
                 LocalsPolicy policy) {
  RegMap copy = current_regs;
  if (policy == LocalsPolicy::Zero) {
    for (auto& [name, v] : copy) v = 0;
  }
  return buffer(StoreMap{}, locals(std::move(copy), c));
}

CmdPtr expand_if(const ExprPtr& b, const CmdPtr& c1, const CmdPtr& c2,
                 SpecMode mode, const RegMap& current_regs,
                 LocalsPolicy policy, bool depth_ok) {
  ExprPtr not_b = unary(UnOp::Not, b);
  auto plain = [&](const CmdPtr& t, const CmdPtr& e) {
    return choice(prefix(act_guard(b), t), prefix(act_guard(not_b), e));
  };
  switch (mode) {
    case SpecMode::Off:
      return plain(c1, c2);
    case SpecMode::AnnotatedLoads:
      return plain(annotate_loads(c1, current_regs),
                   annotate_loads(c2, current_regs));
    case SpecMode::WrongBranch:
    case SpecMode::BothBranches: {
      if (!depth_ok) return plain(c1, c2);
      CmdPtr spec1 = mode == SpecMode::WrongBranch ? c2 : choice(c2, c1);
      CmdPtr spec2 = mode == SpecMode::WrongBranch ? c1 : choice(c1, c2);
      return choice(
          interrupt(speculate(trans_ctx(spec1, current_regs, policy)),
                    prefix(act_guard(b), c1)),
          interrupt(speculate(trans_ctx(spec2, current_regs, policy)),
                    prefix(act_guard(not_b), c2)));
    }
  }
  throw std::logic_error("unknown speculation mode");
}

bool terminated(const Configuration& cfg) {
  for (const auto& p : cfg.procs) {
    if (!is_skip(p.cmd)) return false;
  }
  return true;
}

std::vector<Successor> step(const Configuration& cfg, const StepContext& ctx,
                            ExhaustFlags* flags) {
  std::vector<Successor> out;
  for (int pid = 0; pid < static_cast<int>(cfg.procs.size()); ++pid) {
    const ProcState& proc = cfg.procs[pid];
    if (is_skip(proc.cmd)) continue;

    Env env{&ctx, &cfg.mem, &proc.regs, {}, 0, flags};
    std::vector<LocalsOut> promoted =
        locals_apply(proc.regs, cmd_step(proc.cmd, env), env);

    for (auto& o : promoted) {
      Configuration next = cfg;
      next.procs[pid].regs = std::move(o.regs);
      next.procs[pid].cmd = o.cmd;

      if (const auto* as = std::get_if<Action::Assign>(&o.label.node)) {
        Addr a = ctx.amap->addr_of(key_of_ref(as->target));
        next.mem = cfg.mem.with_store(
            a, std::get<Expr::Lit>(as->value->node).value);
      } else if (const auto* g = std::get_if<Action::Guard>(&o.label.node)) {
        Value v = eval(g->cond, RegMap{}, cfg.mem, *ctx.amap, ctx.value_bits);
        if (v == 0) continue;  // blocked
      } else if (const auto* f = std::get_if<Action::Fetch>(&o.label.node)) {
        next.mem = cache_fetch(cfg.mem, ctx.amap->addr_of(key_of_ref(f->loc)));
      } else if (std::holds_alternative<Action::Flush>(o.label.node)) {
        next.mem = cache_flush(cfg.mem);
      }
      // Fences and taus leave the state unchanged.

      out.push_back({Label{pid, std::move(o.label)}, std::move(next), o.rule});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Successor& a, const Successor& b) {
                     if (a.rule != b.rule) return a.rule < b.rule;
                     return a.cfg.hash() < b.cfg.hash();
                   });
  return out;
}

}  // namespace specmc
