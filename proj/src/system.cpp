#include "specmc/system.hpp"

namespace specmc {

Program Program::build(std::vector<GlobalDecl> globals,
                       std::vector<ProcessDecl> procs, int value_bits) {
  Program p;
  p.globals = std::move(globals);
  p.procs = std::move(procs);
  p.amap = AddressMap::build(p.globals);
  p.initial = initial_image(p.globals, p.amap);
  p.value_bits = value_bits;
  return p;
}

std::size_t Configuration::hash() const {
  std::size_t h = mem.hash();
  for (const auto& p : procs) {
    for (const auto& [k, v] : p.regs) {
      h = hash_combine(h, std::hash<std::string>{}(k));
      h = hash_combine(h, std::hash<Value>{}(v));
    }
    h = hash_combine(h, p.cmd->hash);
  }
  return h;
}

bool Configuration::operator==(const Configuration& o) const {
  if (!(mem == o.mem) || procs.size() != o.procs.size()) return false;
  for (std::size_t i = 0; i < procs.size(); ++i) {
    if (procs[i].regs != o.procs[i].regs) return false;
    if (!cmd_equal(procs[i].cmd, o.procs[i].cmd)) return false;
  }
  return true;
}

Configuration initial_configuration(const Program& prog) {
  Configuration cfg;
  cfg.mem = prog.initial;
  for (const auto& p : prog.procs) {
    cfg.procs.push_back(ProcState{p.regs, p.code});
  }
  return cfg;
}

Value eval(const ExprPtr& e, const RegMap& regs, const MemoryImage& img,
           const AddressMap& amap, int value_bits) {
  struct Eval {
    const RegMap& regs;
    const MemoryImage& img;
    const AddressMap& amap;
    int bits;

    Value ev(const ExprPtr& x) const { return std::visit(*this, x->node); }

    Value operator()(const Expr::Lit& n) const { return n.value; }
    Value operator()(const Expr::Var& n) const {
      auto it = regs.find(n.name);
      if (it != regs.end()) return it->second;
      Addr a = amap.addr_of(n.name, std::nullopt);
      return img.data.at(static_cast<std::size_t>(a));
    }
    Value operator()(const Expr::Elem& n) const {
      Addr a = amap.addr_of(n.array, ev(n.index));
      return img.data.at(static_cast<std::size_t>(a));
    }
    Value operator()(const Expr::Unary& n) const {
      Value v = ev(n.operand);
      if (n.op == UnOp::Not) return v == 0 ? 1 : 0;
      return truncate_value(static_cast<Value>(-static_cast<std::uint64_t>(v)),
                            bits);
    }
    Value operator()(const Expr::Binary& n) const {
      Value l = ev(n.lhs);
      Value r = ev(n.rhs);
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
      return cache_query(img, amap.addr_of(n.loc.name, idx)) ? 1 : 0;
    }
  };
  return Eval{regs, img, amap, value_bits}.ev(e);
}

}  // namespace specmc
