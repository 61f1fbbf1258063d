#include "specmc/parser.hpp"

#include <cctype>
#include <set>

namespace specmc {

namespace {

enum class Tok {
  End,
  Ident,
  Int,
  Assign,   // :=
  Semi,     // ;
  SemiSemi, // ;;
  Choice,   // |~|
  LBrack,
  RBrack,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Plus,
  Minus,
  Lt,
  Le,
  Eq,
  Ne,
  AndAnd,
  Bang,
  Hash,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  Value value = 0;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  Lexer(std::string_view src, bool dotted_idents)
      : src_(src), dotted_(dotted_idents) {
    advance();
  }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Diagnostic(msg, tok_.line, tok_.col);
  }

 private:
  void advance() {
    skip_space();
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_.kind = Tok::End;
      return;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_' || (dotted_ && src_[pos_] == '.'))) {
        bump();
      }
      tok_.kind = Tok::Ident;
      tok_.text = std::string(src_.substr(start, pos_ - start));
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        bump();
      }
      tok_.kind = Tok::Int;
      tok_.text = std::string(src_.substr(start, pos_ - start));
      tok_.value = std::stoll(tok_.text);
      return;
    }
    auto two = [&](char a, char b) {
      return c == a && pos_ + 1 < src_.size() && src_[pos_ + 1] == b;
    };
    if (two(':', '=')) {
      bump();
      bump();
      tok_.kind = Tok::Assign;
      return;
    }
    if (two(';', ';')) {
      bump();
      bump();
      tok_.kind = Tok::SemiSemi;
      return;
    }
    if (c == '|' && pos_ + 2 < src_.size() && src_[pos_ + 1] == '~' &&
        src_[pos_ + 2] == '|') {
      bump();
      bump();
      bump();
      tok_.kind = Tok::Choice;
      return;
    }
    if (two('<', '=')) {
      bump();
      bump();
      tok_.kind = Tok::Le;
      return;
    }
    if (two('!', '=')) {
      bump();
      bump();
      tok_.kind = Tok::Ne;
      return;
    }
    if (two('&', '&')) {
      bump();
      bump();
      tok_.kind = Tok::AndAnd;
      return;
    }
    bump();
    switch (c) {
      case ';':
        tok_.kind = Tok::Semi;
        return;
      case '[':
        tok_.kind = Tok::LBrack;
        return;
      case ']':
        tok_.kind = Tok::RBrack;
        return;
      case '(':
        tok_.kind = Tok::LParen;
        return;
      case ')':
        tok_.kind = Tok::RParen;
        return;
      case '{':
        tok_.kind = Tok::LBrace;
        return;
      case '}':
        tok_.kind = Tok::RBrace;
        return;
      case ',':
        tok_.kind = Tok::Comma;
        return;
      case '+':
        tok_.kind = Tok::Plus;
        return;
      case '-':
        tok_.kind = Tok::Minus;
        return;
      case '<':
        tok_.kind = Tok::Lt;
        return;
      case '=':
        tok_.kind = Tok::Eq;
        return;
      case '!':
        tok_.kind = Tok::Bang;
        return;
      case '#':
        tok_.kind = Tok::Hash;
        return;
      default:
        throw Diagnostic(std::string("unexpected character '") + c + "'",
                         tok_.line, tok_.col);
    }
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view src_;
  bool dotted_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

enum class Sort { Int, Bool };

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text, false) {}

  Program parse() {
    expect_ident("globals");
    expect(Tok::LBrace);
    std::vector<GlobalDecl> globals;
    while (lex_.peek().kind != Tok::RBrace) {
      globals.push_back(parse_decl());
    }
    expect(Tok::RBrace);

    // Array lengths are needed while parsing code (for `#A`).
    for (const auto& d : globals) {
      if (d.name == "cache") {
        lex_.fail("'cache' is reserved; it is only reachable through "
                  "fetch/flush/in_cache");
      }
      if (!lengths_.emplace(d.name, d.is_alias ? 1 : d.size).second) {
        lex_.fail("duplicate global '" + d.name + "'");
      }
      if (d.is_array) arrays_.insert(d.name);
    }

    std::vector<ProcessDecl> procs;
    while (lex_.peek().kind != Tok::End) {
      procs.push_back(parse_process());
    }
    if (procs.empty()) lex_.fail("expected at least one process");

    Program prog = Program::build(std::move(globals), std::move(procs));
    validate(prog);
    return prog;
  }

 private:
  GlobalDecl parse_decl() {
    GlobalDecl d;
    Token name = expect(Tok::Ident);
    if (name.text == "alias") {
      d.is_alias = true;
      d.name = expect(Tok::Ident).text;
      expect(Tok::Eq);
      d.alias_base = expect(Tok::Ident).text;
      expect(Tok::LBrack);
      d.alias_index = parse_int();
      expect(Tok::RBrack);
      d.init = {0};
      if (lex_.peek().kind == Tok::Eq) {
        lex_.take();
        d.init = {parse_int()};
      }
      return d;
    }
    d.name = name.text;
    if (lex_.peek().kind == Tok::LBrack) {
      lex_.take();
      d.is_array = true;
      d.size = parse_int();
      if (d.size <= 0) lex_.fail("array size must be positive");
      expect(Tok::RBrack);
      d.init.assign(static_cast<std::size_t>(d.size), 0);
      if (lex_.peek().kind == Tok::Eq) {
        lex_.take();
        expect(Tok::LBrack);
        std::vector<Value> init;
        if (lex_.peek().kind != Tok::RBrack) {
          init.push_back(parse_int());
          while (lex_.peek().kind == Tok::Comma) {
            lex_.take();
            init.push_back(parse_int());
          }
        }
        expect(Tok::RBrack);
        if (static_cast<Value>(init.size()) != d.size) {
          lex_.fail("initialiser for '" + d.name + "' has " +
                    std::to_string(init.size()) + " entries, expected " +
                    std::to_string(d.size));
        }
        d.init = std::move(init);
      }
      return d;
    }
    expect(Tok::Eq);
    d.init = {parse_int()};
    return d;
  }

  ProcessDecl parse_process() {
    expect_ident("process");
    ProcessDecl p;
    p.name = expect(Tok::Ident).text;
    expect(Tok::LBrace);
    expect_ident("locals");
    expect(Tok::LBrace);
    while (lex_.peek().kind == Tok::Ident) {
      std::string r = lex_.take().text;
      expect(Tok::Eq);
      Value v = parse_int();
      if (!p.regs.emplace(r, v).second) {
        lex_.fail("duplicate register '" + r + "'");
      }
      if (lengths_.count(r)) {
        lex_.fail("register '" + r + "' shadows a global");
      }
      if (r == "cache") lex_.fail("'cache' is reserved");
    }
    expect(Tok::RBrace);
    expect_ident("code");
    expect(Tok::LBrace);
    regs_ = &p.regs;
    p.code = normalize(parse_command());
    regs_ = nullptr;
    expect(Tok::RBrace);
    expect(Tok::RBrace);
    return p;
  }

  CmdPtr parse_command() {
    CmdPtr c = parse_seq();
    while (lex_.peek().kind == Tok::Choice) {
      lex_.take();
      c = choice(c, parse_seq());
    }
    return c;
  }

  CmdPtr parse_seq() {
    CmdPtr first = parse_item();
    Tok k = lex_.peek().kind;
    if (k != Tok::Semi && k != Tok::SemiSemi) return first;
    lex_.take();
    return seq(first, parse_seq(), k == Tok::SemiSemi);
  }

  CmdPtr parse_item() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::LParen) {
      lex_.take();
      CmdPtr c = parse_command();
      expect(Tok::RParen);
      return c;
    }
    if (t.kind == Tok::LBrack) {
      lex_.take();
      ExprPtr e = parse_expr();
      expect(Tok::RBrack);
      return prefix(act_guard(check_sort(e, Sort::Bool)), skip());
    }
    if (t.kind != Tok::Ident) lex_.fail("expected a command");
    if (t.text == "skip") {
      lex_.take();
      return skip();
    }
    if (t.text == "fence") {
      lex_.take();
      return prefix(act_fence(), skip());
    }
    if (t.text == "flush") {
      lex_.take();
      return prefix(act_flush(), skip());
    }
    if (t.text == "fetch") {
      lex_.take();
      expect(Tok::LParen);
      LocRef loc = parse_locref(/*global_only=*/true);
      expect(Tok::RParen);
      return prefix(act_fetch(std::move(loc)), skip());
    }
    if (t.text == "if") {
      lex_.take();
      ExprPtr cond = check_sort(parse_expr(), Sort::Bool);
      expect_ident("then");
      CmdPtr then_cmd = parse_command();
      CmdPtr else_cmd = skip();
      if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "else") {
        lex_.take();
        else_cmd = parse_command();
      }
      expect_ident("fi");
      return if_cmd(std::move(cond), std::move(then_cmd), std::move(else_cmd));
    }
    if (t.text == "while") {
      lex_.take();
      ExprPtr cond = check_sort(parse_expr(), Sort::Bool);
      expect_ident("do");
      CmdPtr body = parse_command();
      expect_ident("od");
      return while_cmd(std::move(cond), std::move(body));
    }
    // Assignment.
    LocRef target = parse_locref(/*global_only=*/false);
    expect(Tok::Assign);
    ExprPtr value = check_sort(parse_expr(), Sort::Int);
    return prefix(act_assign(std::move(target), std::move(value)), skip());
  }

  LocRef parse_locref(bool global_only) {
    Token name = expect(Tok::Ident);
    check_name(name, global_only);
    LocRef loc{name.text, nullptr};
    if (lex_.peek().kind == Tok::LBrack) {
      if (!arrays_.count(name.text)) {
        throw Diagnostic("'" + name.text + "' is not an array", name.line,
                         name.col);
      }
      lex_.take();
      loc.index = check_sort(parse_expr(), Sort::Int);
      expect(Tok::RBrack);
    } else if (arrays_.count(name.text)) {
      throw Diagnostic("array '" + name.text + "' needs an index", name.line,
                       name.col);
    }
    return loc;
  }

  ExprPtr parse_expr() { return parse_and(); }

  ExprPtr parse_and() {
    ExprPtr e = parse_cmp();
    while (lex_.peek().kind == Tok::AndAnd) {
      lex_.take();
      e = binary(BinOp::And, e, parse_cmp());
    }
    return e;
  }

  ExprPtr parse_cmp() {
    ExprPtr e = parse_add();
    Tok k = lex_.peek().kind;
    if (k == Tok::Lt || k == Tok::Le || k == Tok::Eq || k == Tok::Ne) {
      lex_.take();
      BinOp op = k == Tok::Lt   ? BinOp::Lt
                 : k == Tok::Le ? BinOp::Le
                 : k == Tok::Eq ? BinOp::Eq
                                : BinOp::Ne;
      ExprPtr rhs = parse_add();
      check_sort(e, Sort::Int);
      check_sort(rhs, Sort::Int);
      e = binary(op, e, rhs);
    }
    return e;
  }

  ExprPtr parse_add() {
    ExprPtr e = parse_unary();
    while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
      BinOp op = lex_.take().kind == Tok::Plus ? BinOp::Add : BinOp::Sub;
      ExprPtr rhs = parse_unary();
      check_sort(e, Sort::Int);
      check_sort(rhs, Sort::Int);
      e = binary(op, e, rhs);
    }
    return e;
  }

  ExprPtr parse_unary() {
    if (lex_.peek().kind == Tok::Bang) {
      lex_.take();
      return unary(UnOp::Not, parse_unary());
    }
    if (lex_.peek().kind == Tok::Minus) {
      lex_.take();
      return unary(UnOp::Neg, check_sort(parse_unary(), Sort::Int));
    }
    return parse_atom();
  }

  ExprPtr parse_atom() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Int) {
      return lit(lex_.take().value);
    }
    if (t.kind == Tok::LParen) {
      lex_.take();
      ExprPtr e = parse_expr();
      expect(Tok::RParen);
      return e;
    }
    if (t.kind == Tok::Hash) {
      lex_.take();
      Token name = expect(Tok::Ident);
      auto it = lengths_.find(name.text);
      if (it == lengths_.end() || !arrays_.count(name.text)) {
        throw Diagnostic("'#" + name.text + "' needs a declared array",
                         name.line, name.col);
      }
      return lit(it->second);
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "in_cache") {
        lex_.take();
        expect(Tok::LParen);
        LocRef loc = parse_locref(/*global_only=*/true);
        expect(Tok::RParen);
        return in_cache(std::move(loc));
      }
      Token name = lex_.take();
      check_name(name, false);
      if (lex_.peek().kind == Tok::LBrack) {
        if (!arrays_.count(name.text)) {
          throw Diagnostic("'" + name.text + "' is not an array", name.line,
                           name.col);
        }
        lex_.take();
        ExprPtr idx = check_sort(parse_expr(), Sort::Int);
        expect(Tok::RBrack);
        return elem(name.text, idx);
      }
      if (arrays_.count(name.text)) {
        throw Diagnostic("array '" + name.text + "' needs an index", name.line,
                         name.col);
      }
      return var(name.text);
    }
    lex_.fail("expected an expression");
  }

  void check_name(const Token& name, bool global_only) {
    if (name.text == "cache") {
      throw Diagnostic("'cache' is reserved; use in_cache/fetch/flush",
                       name.line, name.col);
    }
    bool is_reg = regs_ != nullptr && regs_->count(name.text) != 0;
    bool is_glob = lengths_.count(name.text) != 0;
    if (global_only && !is_glob) {
      throw Diagnostic("'" + name.text + "' must be a declared global",
                       name.line, name.col);
    }
    if (!is_reg && !is_glob) {
      throw Diagnostic("use of undeclared name '" + name.text + "'",
                       name.line, name.col);
    }
  }

  Sort sort_of(const ExprPtr& e) {
    struct Sorter {
      Sort operator()(const Expr::Lit&) const { return Sort::Int; }
      Sort operator()(const Expr::Var&) const { return Sort::Int; }
      Sort operator()(const Expr::Elem&) const { return Sort::Int; }
      Sort operator()(const Expr::Unary& n) const {
        return n.op == UnOp::Not ? Sort::Bool : Sort::Int;
      }
      Sort operator()(const Expr::Binary& n) const {
        switch (n.op) {
          case BinOp::Add:
          case BinOp::Sub:
            return Sort::Int;
          default:
            return Sort::Bool;
        }
      }
      Sort operator()(const Expr::InCache&) const { return Sort::Bool; }
    };
    return std::visit(Sorter{}, e->node);
  }

  // Int positions take only Int; Bool positions coerce Int (nonzero=true).
  ExprPtr check_sort(ExprPtr e, Sort want) {
    if (want == Sort::Int && sort_of(e) == Sort::Bool) {
      lex_.fail("boolean expression used where an integer is required: " +
                to_string(e));
    }
    return e;
  }

  void validate(const Program& prog) {
    // Alias targets must land inside the image (build() already placed
    // them); nothing further to check here beyond what build() enforces.
    (void)prog;
  }

  Value parse_int() {
    bool neg = false;
    if (lex_.peek().kind == Tok::Minus) {
      lex_.take();
      neg = true;
    }
    Token t = expect(Tok::Int);
    return neg ? -t.value : t.value;
  }

  Token expect(Tok kind) {
    if (lex_.peek().kind != kind) {
      lex_.fail("unexpected token" +
                (lex_.peek().kind == Tok::Ident ? " '" + lex_.peek().text + "'"
                                                : std::string()));
    }
    return lex_.take();
  }

  Token expect_ident(const std::string& word) {
    const Token& t = lex_.peek();
    if (t.kind != Tok::Ident || t.text != word) {
      lex_.fail("expected '" + word + "'");
    }
    return lex_.take();
  }

  Lexer lex_;
  std::map<std::string, Value> lengths_;
  std::set<std::string> arrays_;
  const RegMap* regs_ = nullptr;
};

}  // namespace

Program parse_program(std::string_view text) { return Parser(text).parse(); }

ExprPtr parse_predicate(std::string_view text, const Program& prog) {
  // Reuse the expression grammar with dotted identifiers enabled.
  Lexer lex(text, true);

  struct PredParser {
    Lexer& lex;
    const Program& prog;

    ExprPtr parse() {
      ExprPtr e = parse_and();
      if (lex.peek().kind != Tok::End) lex.fail("trailing input in predicate");
      return e;
    }

    ExprPtr parse_and() {
      ExprPtr e = parse_cmp();
      while (lex.peek().kind == Tok::AndAnd) {
        lex.take();
        e = binary(BinOp::And, e, parse_cmp());
      }
      return e;
    }
    ExprPtr parse_cmp() {
      ExprPtr e = parse_add();
      Tok k = lex.peek().kind;
      if (k == Tok::Lt || k == Tok::Le || k == Tok::Eq || k == Tok::Ne) {
        lex.take();
        BinOp op = k == Tok::Lt   ? BinOp::Lt
                   : k == Tok::Le ? BinOp::Le
                   : k == Tok::Eq ? BinOp::Eq
                                  : BinOp::Ne;
        e = binary(op, e, parse_add());
      }
      return e;
    }
    ExprPtr parse_add() {
      ExprPtr e = parse_unary();
      while (lex.peek().kind == Tok::Plus || lex.peek().kind == Tok::Minus) {
        BinOp op = lex.take().kind == Tok::Plus ? BinOp::Add : BinOp::Sub;
        e = binary(op, e, parse_unary());
      }
      return e;
    }
    ExprPtr parse_unary() {
      if (lex.peek().kind == Tok::Bang) {
        lex.take();
        return unary(UnOp::Not, parse_unary());
      }
      if (lex.peek().kind == Tok::Minus) {
        lex.take();
        return unary(UnOp::Neg, parse_unary());
      }
      return parse_atom();
    }
    ExprPtr parse_atom() {
      const Token& t = lex.peek();
      if (t.kind == Tok::Int) return lit(lex.take().value);
      if (t.kind == Tok::LParen) {
        lex.take();
        ExprPtr e = parse_and();
        if (lex.peek().kind != Tok::RParen) lex.fail("expected ')'");
        lex.take();
        return e;
      }
      if (t.kind == Tok::Ident && t.text == "in_cache") {
        lex.take();
        if (lex.peek().kind != Tok::LParen) lex.fail("expected '('");
        lex.take();
        ExprPtr inner = parse_atom();
        LocRef loc;
        if (const auto* v = std::get_if<Expr::Var>(&inner->node)) {
          loc = LocRef{v->name, nullptr};
        } else if (const auto* el = std::get_if<Expr::Elem>(&inner->node)) {
          loc = LocRef{el->array, el->index};
        } else {
          lex.fail("in_cache needs a location");
        }
        if (lex.peek().kind != Tok::RParen) lex.fail("expected ')'");
        lex.take();
        return in_cache(std::move(loc));
      }
      if (t.kind == Tok::Ident) {
        Token name = lex.take();
        check_pred_name(name);
        if (lex.peek().kind == Tok::LBrack) {
          lex.take();
          ExprPtr idx = parse_add();
          if (lex.peek().kind != Tok::RBrack) lex.fail("expected ']'");
          lex.take();
          return elem(name.text, idx);
        }
        return var(name.text);
      }
      lex.fail("expected an expression");
    }

    void check_pred_name(const Token& name) {
      const std::string& n = name.text;
      if (prog.amap.is_global(n)) return;
      auto dot = n.find('.');
      if (dot != std::string::npos) {
        std::string proc = n.substr(0, dot);
        std::string reg = n.substr(dot + 1);
        for (const auto& p : prog.procs) {
          if (p.name == proc && p.regs.count(reg)) return;
        }
        throw Diagnostic("unknown register '" + n + "'", name.line, name.col);
      }
      int holders = 0;
      for (const auto& p : prog.procs) holders += p.regs.count(n) ? 1 : 0;
      if (holders == 1) return;
      throw Diagnostic(holders == 0
                           ? "unknown name '" + n + "'"
                           : "ambiguous register '" + n + "'; qualify as "
                             "proc." + n,
                       name.line, name.col);
    }
  };

  return PredParser{lex, prog}.parse();
}

}  // namespace specmc
