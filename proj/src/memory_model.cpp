#include "specmc/memory_model.hpp"

namespace specmc {

namespace {

bool expr_mentions(const ExprPtr& e, const std::string& name) {
  return e != nullptr && names_of(e).count(name) != 0;
}

bool action_mentions(const Action& a, const std::string& name) {
  struct Walk {
    const std::string& name;
    bool operator()(const Action::Assign& n) const {
      if (n.target.name == name) return true;
      if (expr_mentions(n.target.index, name)) return true;
      return expr_mentions(n.value, name);
    }
    bool operator()(const Action::Guard& n) const {
      return expr_mentions(n.cond, name);
    }
    bool operator()(const Action::Fence&) const { return false; }
    bool operator()(const Action::Fetch& n) const {
      return n.loc.name == name || expr_mentions(n.loc.index, name);
    }
    bool operator()(const Action::Flush&) const { return false; }
    bool operator()(const Action::Tau&) const { return false; }
  };
  return std::visit(Walk{name}, a.node);
}

bool guard_mentions_cache(const Action& a) {
  const auto* g = std::get_if<Action::Guard>(&a.node);
  return g != nullptr && mentions_cache(g->cond);
}

void collect_global_names(const ExprPtr& e, const AddressMap& amap,
                          std::set<std::string>& out) {
  if (!e) return;
  for (const auto& n : names_of(e)) {
    if (amap.is_global(n)) out.insert(n);
  }
}

}  // namespace

std::set<std::string> globals_read(const Action& a, const AddressMap& amap) {
  std::set<std::string> out;
  struct Walk {
    const AddressMap& amap;
    std::set<std::string>& out;
    void operator()(const Action::Assign& n) const {
      collect_global_names(n.value, amap, out);
      collect_global_names(n.target.index, amap, out);
    }
    void operator()(const Action::Guard& n) const {
      collect_global_names(n.cond, amap, out);
    }
    void operator()(const Action::Fence&) const {}
    void operator()(const Action::Fetch& n) const {
      collect_global_names(n.loc.index, amap, out);
    }
    void operator()(const Action::Flush&) const {}
    void operator()(const Action::Tau&) const {}
  };
  std::visit(Walk{amap, out}, a.node);
  return out;
}

bool is_store(const Action& a, const AddressMap& amap) {
  const auto* as = std::get_if<Action::Assign>(&a.node);
  return as != nullptr && amap.is_global(as->target.name);
}

bool is_load_like(const Action& a, const AddressMap& amap) {
  if (const auto* g = std::get_if<Action::Guard>(&a.node)) return g->is_load;
  if (const auto* as = std::get_if<Action::Assign>(&a.node)) {
    return !amap.is_global(as->target.name) &&
           !globals_read(a, amap).empty();
  }
  return false;
}

bool reorderable(const Action& earlier, const Action& later,
                 const MemoryModel& m, const AddressMap& amap) {
  // Internal steps reorder with everything; future local computation may
  // be executed ahead of time.
  if (is_tau(earlier) || is_tau(later)) return true;

  // Cache flushes and cache-membership guards stay in place, both ways.
  if (std::holds_alternative<Action::Flush>(earlier.node) ||
      std::holds_alternative<Action::Flush>(later.node)) {
    return false;
  }
  if (guard_mentions_cache(earlier) || guard_mentions_cache(later)) {
    return false;
  }

  // Cache fetch hoisting: a fetch of x may come before assignments and
  // guards that do not involve x.  Fences block it, a store to x services
  // the load instead, and fetches stay ordered among themselves.
  if (const auto* f = std::get_if<Action::Fetch>(&later.node)) {
    const std::string& x = f->loc.name;
    struct EarlierCase {
      const std::string& x;
      const Action& earlier;
      bool operator()(const Action::Assign& n) const {
        if (n.target.name == x) return false;  // would service the load
        return !action_mentions(earlier, x);
      }
      bool operator()(const Action::Guard&) const {
        return !action_mentions(earlier, x);
      }
      bool operator()(const Action::Fence&) const { return false; }
      bool operator()(const Action::Fetch&) const { return false; }
      bool operator()(const Action::Flush&) const { return false; }
      bool operator()(const Action::Tau&) const { return true; }
    };
    return std::visit(EarlierCase{x, earlier}, earlier.node);
  }

  if (m.arch == Arch::TSO) {
    // Loads may come before stores to distinct locations.  A register
    // assignment whose reads are disjoint from the stored location counts:
    // forwarding resolves same-location loads into exactly that shape.
    if (const auto* st = std::get_if<Action::Assign>(&earlier.node)) {
      if (amap.is_global(st->target.name)) {
        const std::string& stored = st->target.name;
        if (const auto* ld = std::get_if<Action::Assign>(&later.node)) {
          if (!amap.is_global(ld->target.name) &&
              !action_mentions(later, stored)) {
            return true;
          }
        }
        if (const auto* g = std::get_if<Action::Guard>(&later.node)) {
          if (g->is_load && !action_mentions(later, stored)) return true;
        }
      }
    }
  }

  // Sequential consistency for everything else.
  return false;
}

Action forward(const Action& earlier, const Action& later,
               const AddressMap& amap) {
  const auto* st = std::get_if<Action::Assign>(&earlier.node);
  if (st == nullptr || !amap.is_global(st->target.name)) return later;
  const auto* v = std::get_if<Expr::Lit>(&st->value->node);
  if (v == nullptr) return later;  // unresolved stores forward nothing

  LocKey key{st->target.name, std::nullopt};
  if (st->target.index) {
    const auto* idx = std::get_if<Expr::Lit>(&st->target.index->node);
    if (idx == nullptr) return later;
    key.index = idx->value;
  }

  struct Fwd {
    const LocKey& key;
    Value val;
    const Action& later;
    Action operator()(const Action::Assign& n) const {
      ExprPtr value = subst_loc(n.value, key, val);
      ExprPtr index =
          n.target.index ? subst_loc(n.target.index, key, val) : nullptr;
      if (value == n.value && index == n.target.index) return later;
      return act_assign(LocRef{n.target.name, index}, value);
    }
    Action operator()(const Action::Guard& n) const {
      ExprPtr cond = subst_loc(n.cond, key, val);
      if (cond == n.cond) return later;
      return Action(Action::Guard{cond, n.is_load, n.load_ref});
    }
    Action operator()(const Action::Fence&) const { return later; }
    Action operator()(const Action::Fetch& n) const {
      if (!n.loc.index) return later;
      ExprPtr index = subst_loc(n.loc.index, key, val);
      if (index == n.loc.index) return later;
      return act_fetch(LocRef{n.loc.name, index});
    }
    Action operator()(const Action::Flush&) const { return later; }
    Action operator()(const Action::Tau&) const { return later; }
  };
  return std::visit(Fwd{key, v->value, later}, later.node);
}

}  // namespace specmc
