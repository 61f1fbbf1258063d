#include "specmc/expr.hpp"

#include <sstream>

namespace specmc {

namespace {

std::size_t hash_node(const Expr::Node& n) {
  struct Hasher {
    std::size_t operator()(const Expr::Lit& e) const {
      return hash_combine(1, std::hash<Value>{}(e.value));
    }
    std::size_t operator()(const Expr::Var& e) const {
      return hash_combine(2, std::hash<std::string>{}(e.name));
    }
    std::size_t operator()(const Expr::Elem& e) const {
      return hash_combine(hash_combine(3, std::hash<std::string>{}(e.array)),
                          e.index->hash);
    }
    std::size_t operator()(const Expr::Unary& e) const {
      return hash_combine(hash_combine(4, static_cast<std::size_t>(e.op)),
                          e.operand->hash);
    }
    std::size_t operator()(const Expr::Binary& e) const {
      std::size_t h = hash_combine(5, static_cast<std::size_t>(e.op));
      h = hash_combine(h, e.lhs->hash);
      return hash_combine(h, e.rhs->hash);
    }
    std::size_t operator()(const Expr::InCache& e) const {
      std::size_t h = hash_combine(6, std::hash<std::string>{}(e.loc.name));
      if (e.loc.index) h = hash_combine(h, e.loc.index->hash);
      return h;
    }
  };
  return std::visit(Hasher{}, n);
}

int precedence(BinOp op) {
  switch (op) {
    case BinOp::And:
      return 1;
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Eq:
    case BinOp::Ne:
      return 2;
    case BinOp::Add:
    case BinOp::Sub:
      return 3;
  }
  return 0;
}

const char* op_token(BinOp op) {
  switch (op) {
    case BinOp::Add:
      return "+";
    case BinOp::Sub:
      return "-";
    case BinOp::Lt:
      return "<";
    case BinOp::Le:
      return "<=";
    case BinOp::Eq:
      return "=";
    case BinOp::Ne:
      return "!=";
    case BinOp::And:
      return "&&";
  }
  return "?";
}

void print(const ExprPtr& e, int parent_prec, std::ostringstream& out) {
  struct Printer {
    int parent_prec;
    std::ostringstream& out;
    void operator()(const Expr::Lit& n) const { out << n.value; }
    void operator()(const Expr::Var& n) const { out << n.name; }
    void operator()(const Expr::Elem& n) const {
      out << n.array << "[";
      print(n.index, 0, out);
      out << "]";
    }
    void operator()(const Expr::Unary& n) const {
      out << (n.op == UnOp::Not ? "!" : "-");
      print(n.operand, 4, out);
    }
    void operator()(const Expr::Binary& n) const {
      const int prec = precedence(n.op);
      const bool parens = prec < parent_prec;
      if (parens) out << "(";
      print(n.lhs, prec, out);
      out << " " << op_token(n.op) << " ";
      print(n.rhs, prec + 1, out);  // left-associative
      if (parens) out << ")";
    }
    void operator()(const Expr::InCache& n) const {
      out << "in_cache(" << to_string(n.loc) << ")";
    }
  };
  std::visit(Printer{parent_prec, out}, e->node);
}

}  // namespace

Expr::Expr(Node n) : node(std::move(n)), hash(hash_node(node)) {}

ExprPtr lit(Value v) { return std::make_shared<Expr>(Expr::Lit{v}); }
ExprPtr var(std::string name) {
  return std::make_shared<Expr>(Expr::Var{std::move(name)});
}
ExprPtr elem(std::string array, ExprPtr index) {
  return std::make_shared<Expr>(Expr::Elem{std::move(array), std::move(index)});
}
ExprPtr unary(UnOp op, ExprPtr operand) {
  return std::make_shared<Expr>(Expr::Unary{op, std::move(operand)});
}
ExprPtr binary(BinOp op, ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<Expr>(Expr::Binary{op, std::move(lhs), std::move(rhs)});
}
ExprPtr in_cache(LocRef loc) {
  return std::make_shared<Expr>(Expr::InCache{std::move(loc)});
}

bool locref_equal(const LocRef& a, const LocRef& b) {
  if (a.name != b.name) return false;
  if ((a.index == nullptr) != (b.index == nullptr)) return false;
  return a.index == nullptr || expr_equal(a.index, b.index);
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->hash != b->hash) return false;
  if (a->node.index() != b->node.index()) return false;
  struct Eq {
    const Expr::Node& rhs;
    bool operator()(const Expr::Lit& l) const {
      return l.value == std::get<Expr::Lit>(rhs).value;
    }
    bool operator()(const Expr::Var& l) const {
      return l.name == std::get<Expr::Var>(rhs).name;
    }
    bool operator()(const Expr::Elem& l) const {
      const auto& r = std::get<Expr::Elem>(rhs);
      return l.array == r.array && expr_equal(l.index, r.index);
    }
    bool operator()(const Expr::Unary& l) const {
      const auto& r = std::get<Expr::Unary>(rhs);
      return l.op == r.op && expr_equal(l.operand, r.operand);
    }
    bool operator()(const Expr::Binary& l) const {
      const auto& r = std::get<Expr::Binary>(rhs);
      return l.op == r.op && expr_equal(l.lhs, r.lhs) &&
             expr_equal(l.rhs, r.rhs);
    }
    bool operator()(const Expr::InCache& l) const {
      return locref_equal(l.loc, std::get<Expr::InCache>(rhs).loc);
    }
  };
  return std::visit(Eq{b->node}, a->node);
}

std::string to_string(const ExprPtr& e) {
  std::ostringstream out;
  print(e, 0, out);
  return out.str();
}

std::string to_string(const LocRef& loc) {
  if (loc.is_scalar()) return loc.name;
  return loc.name + "[" + to_string(loc.index) + "]";
}

void collect_names(const ExprPtr& e, std::set<std::string>& out) {
  struct Walk {
    std::set<std::string>& out;
    void operator()(const Expr::Lit&) const {}
    void operator()(const Expr::Var& n) const { out.insert(n.name); }
    void operator()(const Expr::Elem& n) const {
      out.insert(n.array);
      collect_names(n.index, out);
    }
    void operator()(const Expr::Unary& n) const { collect_names(n.operand, out); }
    void operator()(const Expr::Binary& n) const {
      collect_names(n.lhs, out);
      collect_names(n.rhs, out);
    }
    void operator()(const Expr::InCache& n) const {
      out.insert(n.loc.name);
      if (n.loc.index) collect_names(n.loc.index, out);
    }
  };
  std::visit(Walk{out}, e->node);
}

std::set<std::string> names_of(const ExprPtr& e) {
  std::set<std::string> out;
  collect_names(e, out);
  return out;
}

bool mentions_cache(const ExprPtr& e) {
  struct Walk {
    bool operator()(const Expr::Lit&) const { return false; }
    bool operator()(const Expr::Var&) const { return false; }
    bool operator()(const Expr::Elem& n) const { return mentions_cache(n.index); }
    bool operator()(const Expr::Unary& n) const {
      return mentions_cache(n.operand);
    }
    bool operator()(const Expr::Binary& n) const {
      return mentions_cache(n.lhs) || mentions_cache(n.rhs);
    }
    bool operator()(const Expr::InCache&) const { return true; }
  };
  return std::visit(Walk{}, e->node);
}

ExprPtr subst_vars(const ExprPtr& e, const std::map<std::string, Value>& env) {
  struct Subst {
    const ExprPtr& e;
    const std::map<std::string, Value>& env;
    ExprPtr operator()(const Expr::Lit&) const { return e; }
    ExprPtr operator()(const Expr::Var& n) const {
      auto it = env.find(n.name);
      return it == env.end() ? e : lit(it->second);
    }
    ExprPtr operator()(const Expr::Elem& n) const {
      ExprPtr idx = subst_vars(n.index, env);
      return idx == n.index ? e : elem(n.array, idx);
    }
    ExprPtr operator()(const Expr::Unary& n) const {
      ExprPtr op = subst_vars(n.operand, env);
      return op == n.operand ? e : unary(n.op, op);
    }
    ExprPtr operator()(const Expr::Binary& n) const {
      ExprPtr l = subst_vars(n.lhs, env);
      ExprPtr r = subst_vars(n.rhs, env);
      return (l == n.lhs && r == n.rhs) ? e : binary(n.op, l, r);
    }
    ExprPtr operator()(const Expr::InCache& n) const {
      if (!n.loc.index) return e;
      ExprPtr idx = subst_vars(n.loc.index, env);
      return idx == n.loc.index ? e : in_cache(LocRef{n.loc.name, idx});
    }
  };
  return std::visit(Subst{e, env}, e->node);
}

ExprPtr subst_loc(const ExprPtr& e, const LocKey& loc, Value v) {
  struct Subst {
    const ExprPtr& e;
    const LocKey& loc;
    Value v;
    ExprPtr operator()(const Expr::Lit&) const { return e; }
    ExprPtr operator()(const Expr::Var& n) const {
      if (!loc.index && n.name == loc.name) return lit(v);
      return e;
    }
    ExprPtr operator()(const Expr::Elem& n) const {
      ExprPtr idx = subst_loc(n.index, loc, v);
      if (loc.index && n.array == loc.name) {
        if (const auto* li = std::get_if<Expr::Lit>(&idx->node)) {
          if (li->value == *loc.index) return lit(v);
        }
      }
      return idx == n.index ? e : elem(n.array, idx);
    }
    ExprPtr operator()(const Expr::Unary& n) const {
      ExprPtr op = subst_loc(n.operand, loc, v);
      return op == n.operand ? e : unary(n.op, op);
    }
    ExprPtr operator()(const Expr::Binary& n) const {
      ExprPtr l = subst_loc(n.lhs, loc, v);
      ExprPtr r = subst_loc(n.rhs, loc, v);
      return (l == n.lhs && r == n.rhs) ? e : binary(n.op, l, r);
    }
    ExprPtr operator()(const Expr::InCache&) const {
      // Membership tests name an address, not its contents; forwarding a
      // value does not rewrite them.
      return e;
    }
  };
  return std::visit(Subst{e, loc, v}, e->node);
}

bool is_ground(const ExprPtr& e) {
  struct Walk {
    bool operator()(const Expr::Lit&) const { return true; }
    bool operator()(const Expr::Var&) const { return false; }
    bool operator()(const Expr::Elem&) const { return false; }
    bool operator()(const Expr::Unary& n) const { return is_ground(n.operand); }
    bool operator()(const Expr::Binary& n) const {
      return is_ground(n.lhs) && is_ground(n.rhs);
    }
    bool operator()(const Expr::InCache&) const { return false; }
  };
  return std::visit(Walk{}, e->node);
}

Value eval_ground(const ExprPtr& e, int value_bits) {
  struct Eval {
    int bits;
    Value operator()(const Expr::Lit& n) const { return n.value; }
    Value operator()(const Expr::Var& n) const {
      throw Diagnostic("unbound variable '" + n.name + "'");
    }
    Value operator()(const Expr::Elem& n) const {
      throw Diagnostic("unbound array reference '" + n.array + "'");
    }
    Value operator()(const Expr::Unary& n) const {
      Value v = eval_ground(n.operand, bits);
      if (n.op == UnOp::Not) return v == 0 ? 1 : 0;
      return truncate_value(
          static_cast<Value>(-static_cast<std::uint64_t>(v)), bits);
    }
    Value operator()(const Expr::Binary& n) const {
      Value l = eval_ground(n.lhs, bits);
      Value r = eval_ground(n.rhs, bits);
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
    Value operator()(const Expr::InCache&) const {
      throw Diagnostic("cache test cannot be evaluated without a state");
    }
  };
  return std::visit(Eval{value_bits}, e->node);
}

}  // namespace specmc
