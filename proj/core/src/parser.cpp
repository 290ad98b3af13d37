#include "bri/parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "bri/error.hpp"
#include "bri/print.hpp"
#include "bri/theory.hpp"

namespace bri {

namespace {

enum class Tok { Ident, Int, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 0;
  int col = 0;
};

std::string where(const Token& t) { return std::to_string(t.line) + ":" + std::to_string(t.col); }

[[noreturn]] void fail_at(const Token& t, const std::string& msg) {
  throw Error("parse-error", where(t) + ": " + msg + (t.kind == Tok::End ? " at end of input" : " near '" + t.text + "'"));
}

std::vector<Token> lex(const std::string& s) {
  static const std::vector<std::pair<std::string, std::string>> syms{
      {"→", "->"}, {"≈", "=="}, {"≤", "<="}, {"≥", ">="}, {"≠", "!="}, {"∧", "/\\"},
      {"∨", "\\/"}, {"¬", "not"}, {"->", "->"}, {"==", "=="}, {":=", ":="}, {"<=", "<="},
      {">=", ">="}, {"!=", "!="}, {"/\\", "/\\"}, {"\\/", "\\/"}, {"&&", "/\\"}, {"||", "\\/"},
      {"(", "("}, {")", ")"}, {"[", "["}, {"]", "]"}, {"{", "{"}, {"}", "}"}, {";", ";"},
      {":", ":"}, {",", ","}, {"+", "+"}, {"-", "-"}, {"*", "*"}, {"<", "<"}, {">", ">"},
      {"=", "="}, {"|", "|"}};
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (s[i + k] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) {
        ++col;
      }
    }
    i += n;
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\''))
        ++j;
      t.kind = Tok::Ident;
      t.text = s.substr(i, j - i);
      if (t.text == "and") t = Token{Tok::Sym, "/\\", t.line, t.col};
      if (t.text == "or") t = Token{Tok::Sym, "\\/", t.line, t.col};
      out.push_back(t);
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      t.kind = Tok::Int;
      t.text = s.substr(i, j - i);
      out.push_back(t);
      advance(j - i);
      continue;
    }
    bool found = false;
    for (const auto& [src, norm] : syms) {
      if (s.compare(i, src.size(), src) == 0) {
        t.kind = norm == "not" ? Tok::Ident : Tok::Sym;
        t.text = norm;
        out.push_back(t);
        advance(src.size());
        found = true;
        break;
      }
    }
    if (!found) {
      t.text = std::string(1, c);
      fail_at(t, "unexpected character");
    }
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

bool is_sym(const Token& t, const char* s) { return t.kind == Tok::Sym && t.text == s; }
bool is_ident(const Token& t, const char* s) { return t.kind == Tok::Ident && t.text == s; }

// Untyped syntax tree.
struct Ast {
  enum class K { Name, Int, Op, App } k = K::Name;
  std::string name;
  mpz_class value;
  std::vector<Ast> kids;  // App: head followed by arguments
  Token tok;
};

Ast op_app(const std::string& op, std::vector<Ast> args, const Token& tok) {
  Ast head{Ast::K::Op, op, 0, {}, tok};
  Ast a{Ast::K::App, "", 0, {}, tok};
  a.kids.push_back(head);
  for (auto& x : args) a.kids.push_back(std::move(x));
  return a;
}

class TermParser {
 public:
  TermParser(const std::vector<Token>& toks, std::size_t begin, std::size_t end)
      : toks_(toks), pos_(begin), end_(end) {}

  Ast parse() { return parse_or(); }
  bool at_end() const { return pos_ >= end_; }
  const Token& peek() const { return pos_ < end_ ? toks_[pos_] : end_token(); }
  std::size_t pos() const { return pos_; }

 private:
  const Token& end_token() const {
    static Token e;
    return end_ < toks_.size() ? (toks_[end_].kind == Tok::End ? toks_[end_] : e) : e;
  }
  const Token& next() {
    const Token& t = peek();
    if (!at_end()) ++pos_;
    return t;
  }

  Ast parse_or() {
    Ast l = parse_and();
    while (is_sym(peek(), "\\/")) {
      Token t = next();
      l = op_app("\\/", {l, parse_and()}, t);
    }
    return l;
  }
  Ast parse_and() {
    Ast l = parse_not();
    while (is_sym(peek(), "/\\")) {
      Token t = next();
      l = op_app("/\\", {l, parse_not()}, t);
    }
    return l;
  }
  Ast parse_not() {
    if (is_ident(peek(), "not")) {
      Token t = next();
      if (!starts_atom(peek(), true) && !is_ident(peek(), "not")) return Ast{Ast::K::Op, "not", 0, {}, t};
      return op_app("not", {parse_not()}, t);
    }
    return parse_cmp();
  }
  Ast parse_cmp() {
    Ast l = parse_add();
    static const char* cmps[] = {"<", "<=", ">", ">=", "=", "!="};
    for (const char* c : cmps) {
      if (is_sym(peek(), c)) {
        Token t = next();
        Ast r = parse_add();
        for (const char* c2 : cmps)
          if (is_sym(peek(), c2)) fail_at(peek(), "comparisons do not chain");
        return op_app(c, {l, r}, t);
      }
    }
    return l;
  }
  Ast parse_add() {
    Ast l = parse_mul();
    while (is_sym(peek(), "+") || is_sym(peek(), "-")) {
      Token t = next();
      l = op_app(t.text, {l, parse_mul()}, t);
    }
    return l;
  }
  Ast parse_mul() {
    Ast l = parse_app();
    while (is_sym(peek(), "*")) {
      Token t = next();
      l = op_app("*", {l, parse_app()}, t);
    }
    return l;
  }
  static bool starts_atom(const Token& t, bool operand) {
    if (t.kind == Tok::Int) return true;
    if (t.kind == Tok::Ident) return t.text != "not";
    if (is_sym(t, "(")) return true;
    return operand && is_sym(t, "-");
  }
  Ast parse_app() {
    Ast h = parse_atom(true);
    std::vector<Ast> args;
    while (starts_atom(peek(), false)) args.push_back(parse_atom(false));
    if (args.empty()) return h;
    Ast a{Ast::K::App, "", 0, {}, h.tok};
    a.kids.push_back(h);
    for (auto& x : args) a.kids.push_back(std::move(x));
    return a;
  }
  Ast parse_atom(bool operand) {
    const Token& t = peek();
    if (t.kind == Tok::Int) {
      next();
      return Ast{Ast::K::Int, "", mpz_class(t.text), {}, t};
    }
    if (operand && is_sym(t, "-") && pos_ + 1 < end_ && toks_[pos_ + 1].kind == Tok::Int) {
      next();
      const Token& n = next();
      return Ast{Ast::K::Int, "", -mpz_class(n.text), {}, t};
    }
    if (t.kind == Tok::Ident) {
      next();
      return Ast{Ast::K::Name, t.text, 0, {}, t};
    }
    if (is_sym(t, "(")) {
      next();
      const Token& o = peek();
      static const char* sections[] = {"+", "-", "*", "<", "<=", ">", ">=", "=", "/\\", "\\/"};
      if (pos_ + 1 < end_ && is_sym(toks_[pos_ + 1], ")")) {
        for (const char* sec : sections)
          if (is_sym(o, sec)) {
            next();
            next();
            return Ast{Ast::K::Op, sec, 0, {}, o};
          }
        if (is_ident(o, "not")) {
          next();
          next();
          return Ast{Ast::K::Op, "not", 0, {}, o};
        }
      }
      Ast e = parse_or();
      if (!is_sym(peek(), ")")) fail_at(peek(), "expected ')'");
      next();
      return e;
    }
    fail_at(t, "expected a term");
  }

  const std::vector<Token>& toks_;
  std::size_t pos_;
  std::size_t end_;
};

// ---- type inference -----------------------------------------------------

struct TV;
using TVP = std::shared_ptr<TV>;
struct TV {
  int meta = -1;
  std::string sort;
  TVP from, to;
};

class Infer {
 public:
  TVP fresh() {
    auto v = std::make_shared<TV>();
    v->meta = static_cast<int>(binding_.size());
    binding_.push_back(nullptr);
    return v;
  }
  TVP resolve(TVP t) const {
    while (t->meta >= 0 && binding_[t->meta]) t = binding_[t->meta];
    return t;
  }
  bool occurs(int m, TVP t) const {
    t = resolve(t);
    if (t->meta >= 0) return t->meta == m;
    if (t->from) return occurs(m, t->from) || occurs(m, t->to);
    return false;
  }
  bool unify(TVP a, TVP b) {
    a = resolve(a);
    b = resolve(b);
    if (a == b) return true;
    if (a->meta >= 0) {
      if (b->meta == a->meta) return true;
      if (occurs(a->meta, b)) return false;
      binding_[a->meta] = b;
      return true;
    }
    if (b->meta >= 0) return unify(b, a);
    if (static_cast<bool>(a->from) != static_cast<bool>(b->from)) return false;
    if (!a->from) return a->sort == b->sort;
    return unify(a->from, b->from) && unify(a->to, b->to);
  }
  static TVP from_type(const TypeP& t) {
    auto v = std::make_shared<TV>();
    if (t->is_arrow()) {
      v->from = from_type(t->from);
      v->to = from_type(t->to);
    } else {
      v->sort = t->sort;
    }
    return v;
  }
  TypeP to_type(TVP t) const {
    t = resolve(t);
    if (t->meta >= 0) return nullptr;
    if (!t->from) return sort_type(t->sort);
    TypeP f = to_type(t->from), r = to_type(t->to);
    if (!f || !r) return nullptr;
    return arrow(f, r);
  }
  TVP arrow_tv(TVP a, TVP b) const {
    auto v = std::make_shared<TV>();
    v->from = std::move(a);
    v->to = std::move(b);
    return v;
  }
  static std::string show_tv(const Infer& inf, TVP t) {
    t = inf.resolve(t);
    if (t->meta >= 0) return "?" + std::to_string(t->meta);
    if (!t->from) return t->sort;
    std::string l = show_tv(inf, t->from);
    if (inf.resolve(t->from)->from) l = "(" + l + ")";
    return l + " -> " + show_tv(inf, t->to);
  }

 private:
  std::vector<TVP> binding_;
};

// Ast annotated with inferred types.
struct ENode {
  enum class K { Sym, Var, NewVar, Eq, Neq, App } k = K::Sym;
  SymbolP sym;
  Variable var;
  std::string name;
  TVP type;
  TVP eq_arg;  // for = and !=
  std::vector<ENode> kids;
  Token tok;
};

class Elaborator {
 public:
  Elaborator(const RewriteSystem& sys, Scope& scope) : sys_(sys), scope_(scope) {}

  ENode elab(const Ast& a) {
    ENode n;
    n.tok = a.tok;
    switch (a.k) {
      case Ast::K::Int:
        n.k = ENode::K::Sym;
        n.sym = theory::int_value(a.value);
        n.type = Infer::from_type(int_type());
        return n;
      case Ast::K::Name:
        return elab_name(a);
      case Ast::K::Op:
        return elab_op(a.name, a.tok);
      case Ast::K::App: {
        n.k = ENode::K::App;
        ENode head = elab(a.kids[0]);
        TVP cur = head.type;
        n.kids.push_back(std::move(head));
        for (std::size_t i = 1; i < a.kids.size(); ++i) {
          ENode arg = elab(a.kids[i]);
          TVP res = inf_.fresh();
          if (!inf_.unify(cur, inf_.arrow_tv(arg.type, res)))
            throw Error("type-error", where(a.kids[i].tok) + ": argument of type " + Infer::show_tv(inf_, arg.type) +
                                          " does not fit " + Infer::show_tv(inf_, cur));
          cur = res;
          n.kids.push_back(std::move(arg));
        }
        n.type = cur;
        return n;
      }
    }
    return n;
  }

  void expect(const ENode& n, const TypeP& t) {
    if (!inf_.unify(n.type, Infer::from_type(t)))
      throw Error("type-error", where(n.tok) + ": expected type " + to_string(t) + " but found " +
                                    Infer::show_tv(inf_, n.type));
  }
  void same(const ENode& a, const ENode& b) {
    if (!inf_.unify(a.type, b.type))
      throw Error("type-error", where(b.tok) + ": sides have different types " + Infer::show_tv(inf_, a.type) +
                                    " and " + Infer::show_tv(inf_, b.type));
  }

  // Creates the new variables; call once after all constraints are in.
  void commit() {
    for (auto& [name, tv] : new_vars_) {
      TypeP t = inf_.to_type(tv);
      if (!t) throw Error("type-error", "cannot infer the type of variable " + name);
      Variable v = fresh_variable(name, t);
      scope_.vars[name] = v;
    }
    new_vars_.clear();
  }

  TermP build(const ENode& n) {
    switch (n.k) {
      case ENode::K::Sym:
        return mk_sym(n.sym);
      case ENode::K::Var:
        return mk_var(n.var);
      case ENode::K::NewVar:
        return mk_var(scope_.vars.at(n.name));
      case ENode::K::Eq:
        return mk_sym(eq_symbol(n));
      case ENode::K::Neq:
        throw Error("parse-error", where(n.tok) + ": '!=' must be fully applied");
      case ENode::K::App: {
        const ENode& h = n.kids[0];
        std::vector<TermP> args;
        for (std::size_t i = 1; i < n.kids.size(); ++i) args.push_back(build(n.kids[i]));
        if (h.k == ENode::K::Neq) {
          if (args.size() != 2) throw Error("parse-error", where(n.tok) + ": '!=' must be fully applied");
          return mk_not(mk_binop(eq_symbol(h), args[0], args[1]));
        }
        return mk_app(build(h), args);
      }
    }
    return nullptr;
  }

 private:
  SymbolP eq_symbol(const ENode& n) {
    TypeP t = inf_.to_type(n.eq_arg);
    if (t && !t->is_arrow() && t->sort == "bool") return theory::eq_bool();
    if (t && !(same_type(t, int_type())))
      throw Error("type-error", where(n.tok) + ": '=' compares int or bool values, not " + to_string(t));
    return theory::eq_int();
  }

  ENode elab_name(const Ast& a) {
    ENode n;
    n.tok = a.tok;
    n.name = a.name;
    if (a.name == "true" || a.name == "false") {
      n.k = ENode::K::Sym;
      n.sym = theory::bool_value(a.name == "true");
      n.type = Infer::from_type(bool_type());
      return n;
    }
    if (SymbolP f = sys_.find_symbol(a.name)) {
      n.k = ENode::K::Sym;
      n.sym = f;
      n.type = Infer::from_type(f->type);
      return n;
    }
    if (auto it = scope_.vars.find(a.name); it != scope_.vars.end()) {
      n.k = ENode::K::Var;
      n.var = it->second;
      n.type = Infer::from_type(it->second.type);
      return n;
    }
    if (!scope_.allow_new) throw Error("unknown-name", where(a.tok) + ": unknown variable or symbol '" + a.name + "'");
    n.k = ENode::K::NewVar;
    auto it = new_vars_.find(a.name);
    if (it == new_vars_.end()) it = new_vars_.emplace(a.name, inf_.fresh()).first;
    n.type = it->second;
    return n;
  }

  ENode elab_op(const std::string& op, const Token& tok) {
    ENode n;
    n.tok = tok;
    n.k = ENode::K::Sym;
    if (op == "=" || op == "!=") {
      n.k = op == "=" ? ENode::K::Eq : ENode::K::Neq;
      n.eq_arg = inf_.fresh();
      n.type = inf_.arrow_tv(n.eq_arg, inf_.arrow_tv(n.eq_arg, Infer::from_type(bool_type())));
      return n;
    }
    static const std::map<std::string, SymbolP (*)()> ops{
        {"+", theory::plus}, {"-", theory::minus}, {"*", theory::times}, {"<", theory::lt},
        {"<=", theory::le},  {">", theory::gt},    {">=", theory::ge},   {"/\\", theory::conj},
        {"\\/", theory::disj}, {"not", theory::neg}};
    n.sym = ops.at(op)();
    n.type = Infer::from_type(n.sym->type);
    return n;
  }

  const RewriteSystem& sys_;
  Scope& scope_;
  Infer inf_;
  std::map<std::string, TVP> new_vars_;
};

// Index of the first top-level token equal to sym in [b, e), or e.
std::size_t find_top(const std::vector<Token>& t, std::size_t b, std::size_t e, const char* sym) {
  int depth = 0;
  for (std::size_t i = b; i < e; ++i) {
    if (is_sym(t[i], "(") || is_sym(t[i], "[") || is_sym(t[i], "{")) ++depth;
    if (is_sym(t[i], ")") || is_sym(t[i], "]") || is_sym(t[i], "}")) --depth;
    if (depth == 0 && is_sym(t[i], sym)) return i;
  }
  return e;
}

Ast parse_range(const std::vector<Token>& t, std::size_t b, std::size_t e) {
  if (b >= e) fail_at(t[std::min(b, t.size() - 1)], "expected a term");
  TermParser p(t, b, e);
  Ast a = p.parse();
  if (!p.at_end()) fail_at(p.peek(), "unexpected token");
  return a;
}

// Splits "[phi]" off the end of [b, e); returns the index where it starts.
std::size_t constraint_start(const std::vector<Token>& t, std::size_t b, std::size_t e) {
  if (e == b || !is_sym(t[e - 1], "]")) return e;
  int depth = 0;
  for (std::size_t i = e; i-- > b;) {
    if (is_sym(t[i], "]") || is_sym(t[i], ")")) ++depth;
    if (is_sym(t[i], "[") || is_sym(t[i], "(")) --depth;
    if (depth == 0) return is_sym(t[i], "[") ? i : e;
  }
  fail_at(t[b], "unbalanced brackets");
}

struct Triple {
  TermP lhs, rhs, constraint;
};

Triple parse_pair(const std::vector<Token>& t, std::size_t b, std::size_t e, const char* sep,
                  const RewriteSystem& sys, Scope& scope) {
  std::size_t c = constraint_start(t, b, e);
  std::size_t m = find_top(t, b, c, sep);
  if (m == c) fail_at(t[b], std::string("expected '") + sep + "'");
  Ast l = parse_range(t, b, m);
  Ast r = parse_range(t, m + 1, c);
  std::optional<Ast> phi;
  if (c < e) phi = parse_range(t, c + 1, e - 1);
  Elaborator el(sys, scope);
  ENode ln = el.elab(l), rn = el.elab(r);
  el.same(ln, rn);
  std::optional<ENode> pn;
  if (phi) {
    pn = el.elab(*phi);
    el.expect(*pn, bool_type());
  }
  el.commit();
  Triple out{el.build(ln), el.build(rn), pn ? el.build(*pn) : mk_true()};
  return out;
}

TypeP parse_type_range(const std::vector<Token>& t, std::size_t& i, std::size_t e, const RewriteSystem& sys) {
  TypeP left;
  if (i < e && is_sym(t[i], "(")) {
    ++i;
    left = parse_type_range(t, i, e, sys);
    if (i >= e || !is_sym(t[i], ")")) fail_at(t[std::min(i, t.size() - 1)], "expected ')'");
    ++i;
  } else if (i < e && t[i].kind == Tok::Ident) {
    if (!sys.has_sort(t[i].text)) throw Error("unknown-sort", where(t[i]) + ": " + t[i].text);
    left = sort_type(t[i].text);
    ++i;
  } else {
    fail_at(t[std::min(i, t.size() - 1)], "expected a type");
  }
  if (i < e && is_sym(t[i], "->")) {
    ++i;
    return arrow(left, parse_type_range(t, i, e, sys));
  }
  return left;
}

std::string join_tokens(const std::vector<Token>& t, std::size_t b, std::size_t e) {
  std::string s;
  for (std::size_t i = b; i < e; ++i) s += t[i].text;
  return s;
}

}  // namespace

TypeP parse_type(const std::string& text, const RewriteSystem& sys) {
  auto toks = lex(text);
  std::size_t i = 0, e = toks.size() - 1;
  TypeP t = parse_type_range(toks, i, e, sys);
  if (i != e) fail_at(toks[i], "unexpected token in type");
  return t;
}

TermP parse_term(const std::string& text, const RewriteSystem& sys, Scope& scope, const TypeP& expected) {
  auto toks = lex(text);
  Ast a = parse_range(toks, 0, toks.size() - 1);
  Elaborator el(sys, scope);
  ENode n = el.elab(a);
  if (expected) el.expect(n, expected);
  el.commit();
  return el.build(n);
}

Equation parse_equation(const std::string& text, const RewriteSystem& sys, Scope& scope) {
  auto toks = lex(text);
  Triple tr = parse_pair(toks, 0, toks.size() - 1, "==", sys, scope);
  return Equation{"", tr.lhs, tr.rhs, tr.constraint};
}

Subst parse_subst(const std::string& text, const RewriteSystem& sys, const Scope& dom, Scope& img) {
  auto toks = lex(text);
  std::size_t e = toks.size() - 1;
  if (e < 2 || !is_sym(toks[0], "[") || !is_sym(toks[e - 1], "]")) fail_at(toks[0], "expected [x := t, ...]");
  Subst s;
  std::size_t i = 1;
  while (i < e - 1) {
    if (toks[i].kind != Tok::Ident || i + 1 >= e || !is_sym(toks[i + 1], ":=")) fail_at(toks[i], "expected x := t");
    auto it = dom.vars.find(toks[i].text);
    if (it == dom.vars.end()) throw Error("unknown-name", where(toks[i]) + ": no variable '" + toks[i].text + "' to substitute");
    std::size_t b = i + 2;
    std::size_t stop = find_top(toks, b, e - 1, ",");
    Ast a = parse_range(toks, b, stop);
    Elaborator el(sys, img);
    ENode n = el.elab(a);
    el.expect(n, it->second.type);
    el.commit();
    s.bind(it->second, el.build(n));
    i = stop + 1;
  }
  return s;
}

RewriteSystem parse_system(const std::string& text) {
  RewriteSystem sys;
  auto toks = lex(text);
  std::size_t i = 0, end = toks.size() - 1;
  while (i < end) {
    std::size_t e = find_top(toks, i, end, ";");
    if (e == end) fail_at(toks[i], "missing ';'");
    if (e == i) {
      ++i;
      continue;
    }
    const Token& first = toks[i];
    if (is_ident(first, "sort")) {
      if (e == i + 1) fail_at(first, "expected a sort name");
      for (std::size_t k = i + 1; k < e; ++k) {
        if (toks[k].kind != Tok::Ident) fail_at(toks[k], "expected a sort name");
        sys.add_sort(toks[k].text);
      }
    } else if (is_ident(first, "fun")) {
      std::size_t colon = find_top(toks, i, e, ":");
      if (colon == e || colon == i + 1) fail_at(first, "expected fun name : type");
      std::size_t k = colon + 1;
      TypeP ty = parse_type_range(toks, k, e, sys);
      if (k != e) fail_at(toks[k], "unexpected token in type");
      for (std::size_t n = i + 1; n < colon; ++n) {
        if (toks[n].kind != Tok::Ident) fail_at(toks[n], "expected a symbol name");
        if (toks[n].text == "true" || toks[n].text == "false" || toks[n].text == "not")
          fail_at(toks[n], "reserved name");
        sys.add_symbol(make_symbol(toks[n].text, ty));
      }
    } else if (is_ident(first, "trust")) {
      std::string what = join_tokens(toks, i + 1, e);
      if (what == "quasi-reductive" || what == "quasi_reductive")
        sys.trust_quasi_reductive = true;
      else if (what == "termination")
        sys.trust_termination = true;
      else
        fail_at(toks[i + 1], "unknown trust pragma");
    } else if (is_ident(first, "axiom")) {
      std::size_t colon = find_top(toks, i, e, ":");
      if (colon == e || i + 1 >= colon || toks[i + 1].kind != Tok::Ident) fail_at(first, "expected axiom name : equation");
      std::string mode = join_tokens(toks, i + 2, colon);
      Axiom ax;
      if (mode.empty() || mode == "ground-confluent")
        ax.mode = AxiomMode::GroundConfluent;
      else if (mode == "bounded-convertible")
        ax.mode = AxiomMode::BoundedConvertible;
      else
        fail_at(toks[i + 2], "unknown axiom mode");
      Scope scope;
      Triple tr = parse_pair(toks, colon + 1, e, "==", sys, scope);
      ax.eq = Equation{toks[i + 1].text, tr.lhs, tr.rhs, tr.constraint};
      sys.add_axiom(ax);
    } else {
      std::string label;
      std::size_t b = i;
      if (first.kind == Tok::Ident && i + 1 < e && is_sym(toks[i + 1], ":")) {
        label = first.text;
        b = i + 2;
      }
      std::size_t c = constraint_start(toks, b, e);
      bool is_rule = find_top(toks, b, c, "->") < c;
      Scope scope;
      if (is_rule) {
        Triple tr = parse_pair(toks, b, e, "->", sys, scope);
        try {
          sys.add_rule(Rule{label, tr.lhs, tr.rhs, tr.constraint, RuleOrigin::User});
        } catch (const Error& err) {
          throw Error(err.code(), where(first) + ": " + err.detail());
        }
      } else if (find_top(toks, b, c, "==") < c) {
        Triple tr = parse_pair(toks, b, e, "==", sys, scope);
        if (label.empty()) label = "G" + std::to_string(sys.goals().size() + 1);
        sys.add_goal(Equation{label, tr.lhs, tr.rhs, tr.constraint});
      } else {
        fail_at(first, "expected a declaration, rule or equation");
      }
    }
    i = e + 1;
  }
  return sys;
}

RewriteSystem load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io-error", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_system(ss.str());
}

std::string print_system(const RewriteSystem& sys) {
  std::string out;
  for (const auto& s : sys.sorts()) out += "sort " + s + ";\n";
  for (const auto& f : sys.symbols()) out += "fun " + f->name + " : " + to_string(f->type) + ";\n";
  for (std::size_t i = 0; i < sys.rules().size(); ++i) {
    const Rule& r = sys.rules()[i];
    std::string label = r.name == "R" + std::to_string(i + 1) ? "" : r.name + ": ";
    out += label + show(r) + ";\n";
  }
  for (const auto& a : sys.axioms())
    out += "axiom " + a.eq.name + (a.mode == AxiomMode::BoundedConvertible ? " bounded-convertible" : "") + ": " +
           show(a.eq) + ";\n";
  for (std::size_t i = 0; i < sys.goals().size(); ++i) {
    const Equation& g = sys.goals()[i];
    std::string label = g.name == "G" + std::to_string(i + 1) ? "" : g.name + ": ";
    out += label + show(g) + ";\n";
  }
  if (sys.trust_quasi_reductive) out += "trust quasi-reductive;\n";
  if (sys.trust_termination) out += "trust termination;\n";
  return out;
}

}  // namespace bri
