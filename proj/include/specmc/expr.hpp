#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "specmc/values.hpp"

namespace specmc {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Reference to a storage location: a scalar (`index == nullptr`) or an array
// element with an index expression.
struct LocRef {
  std::string name;
  ExprPtr index;

  bool is_scalar() const { return index == nullptr; }
};

// A fully resolved location: scalar name or array element with a concrete
// index.  Used as the key type for transient buffers.
struct LocKey {
  std::string name;
  std::optional<Value> index;

  bool operator<(const LocKey& o) const {
    if (name != o.name) return name < o.name;
    return index < o.index;
  }
  bool operator==(const LocKey& o) const {
    return name == o.name && index == o.index;
  }
  std::string str() const {
    return index ? name + "[" + std::to_string(*index) + "]" : name;
  }
};

enum class BinOp { Add, Sub, Lt, Le, Eq, Ne, And };
enum class UnOp { Neg, Not };

// Expression tree.  Immutable; nodes are shared freely.  Comparisons and
// logical operators yield 0/1; guards treat nonzero as true.
struct Expr {
  struct Lit {
    Value value;
  };
  struct Var {
    std::string name;  // register or global scalar
  };
  struct Elem {
    std::string array;
    ExprPtr index;
  };
  struct Unary {
    UnOp op;
    ExprPtr operand;
  };
  struct Binary {
    BinOp op;
    ExprPtr lhs;
    ExprPtr rhs;
  };
  struct InCache {
    LocRef loc;
  };
  using Node = std::variant<Lit, Var, Elem, Unary, Binary, InCache>;

  Node node;
  std::size_t hash;

  explicit Expr(Node n);
};

ExprPtr lit(Value v);
ExprPtr var(std::string name);
ExprPtr elem(std::string array, ExprPtr index);
ExprPtr unary(UnOp op, ExprPtr operand);
ExprPtr binary(BinOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr in_cache(LocRef loc);

bool expr_equal(const ExprPtr& a, const ExprPtr& b);
bool locref_equal(const LocRef& a, const LocRef& b);

std::string to_string(const ExprPtr& e);
std::string to_string(const LocRef& loc);

// All variable names occurring in e (registers and globals alike; includes
// array base names and names inside cache-membership tests).
void collect_names(const ExprPtr& e, std::set<std::string>& out);
std::set<std::string> names_of(const ExprPtr& e);

bool mentions_cache(const ExprPtr& e);

// Substitute scalar variables by literal values (register resolution).
ExprPtr subst_vars(const ExprPtr& e, const std::map<std::string, Value>& env);

// Substitute one resolved location (scalar or array element with literal
// index) by a literal value.  Used for store forwarding and buffer service.
ExprPtr subst_loc(const ExprPtr& e, const LocKey& loc, Value v);

// True if e contains no Var/Elem/InCache nodes at all.
bool is_ground(const ExprPtr& e);

// Evaluate a ground expression.  Throws Diagnostic on non-ground input.
Value eval_ground(const ExprPtr& e, int value_bits = kDefaultValueBits);

}  // namespace specmc
