#include "specmc/command.hpp"

#include <sstream>
#include <stdexcept>

namespace specmc {

namespace {

std::size_t hash_regs(const RegMap& regs) {
  std::size_t h = 31;
  for (const auto& [k, v] : regs) {
    h = hash_combine(h, std::hash<std::string>{}(k));
    h = hash_combine(h, std::hash<Value>{}(v));
  }
  return h;
}

std::size_t hash_store(const StoreMap& store) {
  std::size_t h = 37;
  for (const auto& [k, v] : store) {
    h = hash_combine(h, std::hash<std::string>{}(k.name));
    h = hash_combine(h, k.index ? std::hash<Value>{}(*k.index) : 0x5157);
    h = hash_combine(h, std::hash<Value>{}(v));
  }
  return h;
}

std::size_t hash_node(const Command::Node& n) {
  struct Hasher {
    std::size_t operator()(const Command::Skip&) const { return 21; }
    std::size_t operator()(const Command::Prefix& c) const {
      std::size_t h = hash_combine(22, c.act.hash);
      h = hash_combine(h, c.rest->hash);
      return hash_combine(h, c.strict ? 1 : 0);
    }
    std::size_t operator()(const Command::Choice& c) const {
      return hash_combine(hash_combine(23, c.left->hash), c.right->hash);
    }
    std::size_t operator()(const Command::If& c) const {
      std::size_t h = hash_combine(24, c.cond->hash);
      h = hash_combine(h, c.then_cmd->hash);
      return hash_combine(h, c.else_cmd->hash);
    }
    std::size_t operator()(const Command::While& c) const {
      std::size_t h = hash_combine(25, c.cond->hash);
      h = hash_combine(h, c.body->hash);
      h = hash_combine(h, c.cont->hash);
      return hash_combine(h, static_cast<std::size_t>(c.unfolds));
    }
    std::size_t operator()(const Command::Seq& c) const {
      std::size_t h = hash_combine(26, c.first->hash);
      h = hash_combine(h, c.second->hash);
      return hash_combine(h, c.strict ? 1 : 0);
    }
    std::size_t operator()(const Command::Speculate& c) const {
      return hash_combine(27, c.body->hash);
    }
    std::size_t operator()(const Command::Interrupt& c) const {
      return hash_combine(hash_combine(28, c.pre->hash), c.cont->hash);
    }
    std::size_t operator()(const Command::Buffer& c) const {
      return hash_combine(hash_combine(29, hash_store(c.store)),
                          c.body->hash);
    }
    std::size_t operator()(const Command::Locals& c) const {
      return hash_combine(hash_combine(30, hash_regs(c.regs)), c.body->hash);
    }
  };
  return std::visit(Hasher{}, n);
}

}  // namespace

Command::Command(Node n) : node(std::move(n)), hash(hash_node(node)) {}

CmdPtr skip() {
  static const CmdPtr instance = std::make_shared<Command>(Command::Skip{});
  return instance;
}
CmdPtr prefix(Action a, CmdPtr rest) {
  return std::make_shared<Command>(
      Command::Prefix{std::move(a), std::move(rest), false});
}
CmdPtr strict_prefix(Action a, CmdPtr rest) {
  return std::make_shared<Command>(
      Command::Prefix{std::move(a), std::move(rest), true});
}
CmdPtr choice(CmdPtr l, CmdPtr r) {
  return std::make_shared<Command>(Command::Choice{std::move(l), std::move(r)});
}
CmdPtr if_cmd(ExprPtr cond, CmdPtr t, CmdPtr e) {
  return std::make_shared<Command>(
      Command::If{std::move(cond), std::move(t), std::move(e)});
}
CmdPtr while_cmd(ExprPtr cond, CmdPtr body, CmdPtr cont, int unfolds) {
  if (!cont) cont = skip();
  return std::make_shared<Command>(
      Command::While{std::move(cond), std::move(body), std::move(cont),
                     unfolds});
}
CmdPtr seq(CmdPtr first, CmdPtr second, bool strict) {
  return std::make_shared<Command>(
      Command::Seq{std::move(first), std::move(second), strict});
}
CmdPtr speculate(CmdPtr body) {
  return std::make_shared<Command>(Command::Speculate{std::move(body)});
}
CmdPtr interrupt(CmdPtr pre, CmdPtr cont) {
  return std::make_shared<Command>(
      Command::Interrupt{std::move(pre), std::move(cont)});
}
CmdPtr buffer(StoreMap store, CmdPtr body) {
  return std::make_shared<Command>(
      Command::Buffer{std::move(store), std::move(body)});
}
CmdPtr locals(RegMap regs, CmdPtr body) {
  return std::make_shared<Command>(
      Command::Locals{std::move(regs), std::move(body)});
}

bool is_skip(const CmdPtr& c) {
  return std::holds_alternative<Command::Skip>(c->node);
}

bool cmd_equal(const CmdPtr& a, const CmdPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->hash != b->hash) return false;
  if (a->node.index() != b->node.index()) return false;
  struct Eq {
    const Command::Node& rhs;
    bool operator()(const Command::Skip&) const { return true; }
    bool operator()(const Command::Prefix& l) const {
      const auto& r = std::get<Command::Prefix>(rhs);
      return l.strict == r.strict && action_equal(l.act, r.act) &&
             cmd_equal(l.rest, r.rest);
    }
    bool operator()(const Command::Choice& l) const {
      const auto& r = std::get<Command::Choice>(rhs);
      return cmd_equal(l.left, r.left) && cmd_equal(l.right, r.right);
    }
    bool operator()(const Command::If& l) const {
      const auto& r = std::get<Command::If>(rhs);
      return expr_equal(l.cond, r.cond) && cmd_equal(l.then_cmd, r.then_cmd) &&
             cmd_equal(l.else_cmd, r.else_cmd);
    }
    bool operator()(const Command::While& l) const {
      const auto& r = std::get<Command::While>(rhs);
      return l.unfolds == r.unfolds && expr_equal(l.cond, r.cond) &&
             cmd_equal(l.body, r.body) && cmd_equal(l.cont, r.cont);
    }
    bool operator()(const Command::Seq& l) const {
      const auto& r = std::get<Command::Seq>(rhs);
      return l.strict == r.strict && cmd_equal(l.first, r.first) &&
             cmd_equal(l.second, r.second);
    }
    bool operator()(const Command::Speculate& l) const {
      return cmd_equal(l.body, std::get<Command::Speculate>(rhs).body);
    }
    bool operator()(const Command::Interrupt& l) const {
      const auto& r = std::get<Command::Interrupt>(rhs);
      return cmd_equal(l.pre, r.pre) && cmd_equal(l.cont, r.cont);
    }
    bool operator()(const Command::Buffer& l) const {
      const auto& r = std::get<Command::Buffer>(rhs);
      return l.store == r.store && cmd_equal(l.body, r.body);
    }
    bool operator()(const Command::Locals& l) const {
      const auto& r = std::get<Command::Locals>(rhs);
      return l.regs == r.regs && cmd_equal(l.body, r.body);
    }
  };
  return std::visit(Eq{b->node}, a->node);
}

namespace {

// Attach `second` after `first`.  `strict` is the strictness of the join:
// it lands on the bond between first's final action(s) and second.
CmdPtr seq_norm(const CmdPtr& first, const CmdPtr& second, bool strict) {
  struct Join {
    const CmdPtr& second;
    bool strict;
    CmdPtr operator()(const Command::Skip&) const { return second; }
    CmdPtr operator()(const Command::Prefix& c) const {
      if (is_skip(c.rest)) {
        return std::make_shared<Command>(
            Command::Prefix{c.act, second, strict});
      }
      return std::make_shared<Command>(
          Command::Prefix{c.act, seq_norm(c.rest, second, strict), c.strict});
    }
    CmdPtr operator()(const Command::Choice& c) const {
      return choice(seq_norm(c.left, second, strict),
                    seq_norm(c.right, second, strict));
    }
    CmdPtr operator()(const Command::If& c) const {
      return if_cmd(c.cond, seq_norm(c.then_cmd, second, strict),
                    seq_norm(c.else_cmd, second, strict));
    }
    CmdPtr operator()(const Command::While& c) const {
      return while_cmd(c.cond, c.body, seq_norm(c.cont, second, strict),
                       c.unfolds);
    }
    CmdPtr operator()(const Command::Seq& c) const {
      return seq_norm(c.first, seq_norm(c.second, second, strict), c.strict);
    }
    CmdPtr operator()(const Command::Speculate&) const {
      throw std::logic_error("seq over a speculation context");
    }
    CmdPtr operator()(const Command::Interrupt&) const {
      throw std::logic_error("seq over a pre-execution context");
    }
    CmdPtr operator()(const Command::Buffer&) const {
      throw std::logic_error("seq over a transient buffer");
    }
    CmdPtr operator()(const Command::Locals&) const {
      throw std::logic_error("seq over a locals wrapper");
    }
  };
  return std::visit(Join{second, strict}, first->node);
}

}  // namespace

CmdPtr normalize(const CmdPtr& c) {
  struct Norm {
    const CmdPtr& c;
    CmdPtr operator()(const Command::Skip&) const { return c; }
    CmdPtr operator()(const Command::Prefix& n) const {
      CmdPtr rest = normalize(n.rest);
      if (rest == n.rest) return c;
      return std::make_shared<Command>(Command::Prefix{n.act, rest, n.strict});
    }
    CmdPtr operator()(const Command::Choice& n) const {
      CmdPtr l = normalize(n.left), r = normalize(n.right);
      return (l == n.left && r == n.right) ? c : choice(l, r);
    }
    CmdPtr operator()(const Command::If& n) const {
      CmdPtr t = normalize(n.then_cmd), e = normalize(n.else_cmd);
      return (t == n.then_cmd && e == n.else_cmd) ? c : if_cmd(n.cond, t, e);
    }
    CmdPtr operator()(const Command::While& n) const {
      CmdPtr b = normalize(n.body), k = normalize(n.cont);
      return (b == n.body && k == n.cont)
                 ? c
                 : while_cmd(n.cond, b, k, n.unfolds);
    }
    CmdPtr operator()(const Command::Seq& n) const {
      return seq_norm(normalize(n.first), normalize(n.second), n.strict);
    }
    CmdPtr operator()(const Command::Speculate& n) const {
      CmdPtr b = normalize(n.body);
      return b == n.body ? c : speculate(b);
    }
    CmdPtr operator()(const Command::Interrupt& n) const {
      CmdPtr p = normalize(n.pre), k = normalize(n.cont);
      return (p == n.pre && k == n.cont) ? c : interrupt(p, k);
    }
    CmdPtr operator()(const Command::Buffer& n) const {
      CmdPtr b = normalize(n.body);
      return b == n.body ? c : buffer(n.store, b);
    }
    CmdPtr operator()(const Command::Locals& n) const {
      CmdPtr b = normalize(n.body);
      return b == n.body ? c : locals(n.regs, b);
    }
  };
  return std::visit(Norm{c}, c->node);
}

std::string to_string(const CmdPtr& c) {
  struct Printer {
    std::ostringstream& out;
    void operator()(const Command::Skip&) const { out << "skip"; }
    void operator()(const Command::Prefix& n) const {
      out << to_string(n.act) << (n.strict ? " ;; " : " ; ");
      std::visit(Printer{out}, n.rest->node);
    }
    void operator()(const Command::Choice& n) const {
      out << "(";
      std::visit(Printer{out}, n.left->node);
      out << ") |~| (";
      std::visit(Printer{out}, n.right->node);
      out << ")";
    }
    void operator()(const Command::If& n) const {
      out << "if " << to_string(n.cond) << " then ";
      std::visit(Printer{out}, n.then_cmd->node);
      out << " else ";
      std::visit(Printer{out}, n.else_cmd->node);
      out << " fi";
    }
    void operator()(const Command::While& n) const {
      out << "while " << to_string(n.cond) << " do ";
      std::visit(Printer{out}, n.body->node);
      out << " od";
      if (!is_skip(n.cont)) {
        out << " ; ";
        std::visit(Printer{out}, n.cont->node);
      }
    }
    void operator()(const Command::Seq& n) const {
      out << "(";
      std::visit(Printer{out}, n.first->node);
      out << (n.strict ? ") ;; (" : ") ; (");
      std::visit(Printer{out}, n.second->node);
      out << ")";
    }
    void operator()(const Command::Speculate& n) const {
      out << "<spec ";
      std::visit(Printer{out}, n.body->node);
      out << ">";
    }
    void operator()(const Command::Interrupt& n) const {
      out << "<int ";
      std::visit(Printer{out}, n.pre->node);
      out << " |> ";
      std::visit(Printer{out}, n.cont->node);
      out << ">";
    }
    void operator()(const Command::Buffer& n) const {
      out << "<buf {";
      bool sep = false;
      for (const auto& [k, v] : n.store) {
        if (sep) out << ", ";
        out << k.str() << ":" << v;
        sep = true;
      }
      out << "} ";
      std::visit(Printer{out}, n.body->node);
      out << ">";
    }
    void operator()(const Command::Locals& n) const {
      out << "<loc {";
      bool sep = false;
      for (const auto& [k, v] : n.regs) {
        if (sep) out << ", ";
        out << k << ":" << v;
        sep = true;
      }
      out << "} ";
      std::visit(Printer{out}, n.body->node);
      out << ">";
    }
  };
  std::ostringstream out;
  std::visit(Printer{out}, c->node);
  return out.str();
}

}  // namespace specmc
