#include "specmc/action.hpp"

namespace specmc {

namespace {

std::size_t hash_node(const Action::Node& n) {
  struct Hasher {
    std::size_t operator()(const Action::Assign& a) const {
      std::size_t h = hash_combine(11, std::hash<std::string>{}(a.target.name));
      if (a.target.index) h = hash_combine(h, a.target.index->hash);
      return hash_combine(h, a.value->hash);
    }
    std::size_t operator()(const Action::Guard& a) const {
      std::size_t h = hash_combine(12, a.cond->hash);
      return hash_combine(h, a.is_load ? 1 : 0);
    }
    std::size_t operator()(const Action::Fence&) const { return 13; }
    std::size_t operator()(const Action::Fetch& a) const {
      std::size_t h = hash_combine(14, std::hash<std::string>{}(a.loc.name));
      if (a.loc.index) h = hash_combine(h, a.loc.index->hash);
      return h;
    }
    std::size_t operator()(const Action::Flush&) const { return 15; }
    std::size_t operator()(const Action::Tau&) const { return 16; }
  };
  return std::visit(Hasher{}, n);
}

}  // namespace

Action::Action(Node n) : node(std::move(n)), hash(hash_node(node)) {}

Action act_assign(LocRef target, ExprPtr value) {
  return Action(Action::Assign{std::move(target), std::move(value)});
}
Action act_guard(ExprPtr cond) {
  return Action(Action::Guard{std::move(cond), false, nullptr});
}
Action act_load_guard(ExprPtr cond, ExprPtr load_ref) {
  return Action(Action::Guard{std::move(cond), true, std::move(load_ref)});
}
Action act_fence() { return Action(Action::Fence{}); }
Action act_fetch(LocRef loc) { return Action(Action::Fetch{std::move(loc)}); }
Action act_flush() { return Action(Action::Flush{}); }
Action act_tau() { return Action(Action::Tau{}); }

bool action_equal(const Action& a, const Action& b) {
  if (a.hash != b.hash) return false;
  if (a.node.index() != b.node.index()) return false;
  struct Eq {
    const Action::Node& rhs;
    bool operator()(const Action::Assign& l) const {
      const auto& r = std::get<Action::Assign>(rhs);
      return locref_equal(l.target, r.target) && expr_equal(l.value, r.value);
    }
    bool operator()(const Action::Guard& l) const {
      const auto& r = std::get<Action::Guard>(rhs);
      return l.is_load == r.is_load && expr_equal(l.cond, r.cond);
    }
    bool operator()(const Action::Fence&) const { return true; }
    bool operator()(const Action::Fetch& l) const {
      return locref_equal(l.loc, std::get<Action::Fetch>(rhs).loc);
    }
    bool operator()(const Action::Flush&) const { return true; }
    bool operator()(const Action::Tau&) const { return true; }
  };
  return std::visit(Eq{b.node}, a.node);
}

std::string to_string(const Action& a) {
  struct Printer {
    std::string operator()(const Action::Assign& n) const {
      return to_string(n.target) + " := " + to_string(n.value);
    }
    std::string operator()(const Action::Guard& n) const {
      return "[" + to_string(n.cond) + "]";
    }
    std::string operator()(const Action::Fence&) const { return "fence"; }
    std::string operator()(const Action::Fetch& n) const {
      return "fetch " + to_string(n.loc);
    }
    std::string operator()(const Action::Flush&) const { return "flush"; }
    std::string operator()(const Action::Tau&) const { return "tau"; }
  };
  return std::visit(Printer{}, a.node);
}

bool is_silent(const Action& a) {
  if (is_tau(a)) return true;
  if (const auto* g = std::get_if<Action::Guard>(&a.node)) return g->is_load;
  return false;
}

}  // namespace specmc
