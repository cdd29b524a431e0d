#pragma once

// Text syntax for formulas, proof terms, signatures and .lct documents.
//
//   formula  A ::= A -> A | A \/ A | A /\ A | ~A | bot | P(m, ...) | X(m)
//                | forall al. A | exists al. A | forall X. A | exists X. A
//   term     t ::= t par[a : A -> B] t | t par[a : A -> B, B -> A] t | t par a t
//                | fun x : A => t | fun x => t | fun [al] => t | Fun X => t
//                | h f1 ... fn
//   head     h ::= inj0[A] s | inj1 s | wit[A] m s | efq[P] s | s
//   atom     s ::= x | (t) | <t, t> | abort[A -> B] | abort
//   frame    f ::= s | [m] | pi0 | pi1 | case[x : A => t | y : B => t]
//                | excase[al, x : A => t] | {al. A}
//
// `par` is right-associative and binds loosest; `->` is right-associative;
// quantifier and `fun` bodies extend as far right as possible. Binders
// starting with an upper-case letter are predicate variables. `~A` is
// A -> bot and `exists X. A` abbreviates
// forall Y. (forall X. A -> Y(c)) -> Y(c) with c the first declared
// constant.

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dlc/subst.hpp"
#include "dlc/syntax.hpp"
#include "dlc/typecheck.hpp"

namespace dlc {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(int line, int column, const std::string& msg)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

namespace detail {

struct Token {
  enum Kind { Ident, Sym, End } kind = End;
  std::string text;
  int line = 1;
  int column = 1;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

inline std::vector<Token> tokenize(std::string_view src) {
  static const char* two[] = {"=>", "->", "\\/", "/\\"};
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      t.kind = Token::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
      out.push_back(t);
      continue;
    }
    bool matched = false;
    for (const char* s : two) {
      if (src.substr(i, 2) == s) {
        t.kind = Token::Sym;
        t.text = s;
        advance(2);
        matched = true;
        break;
      }
    }
    if (!matched) {
      if (std::string_view("()[]{}<>,.:;|~").find(c) == std::string_view::npos)
        throw SyntaxError(line, col, std::string("unexpected character '") + c + "'");
      t.kind = Token::Sym;
      t.text = std::string(1, c);
      advance(1);
    }
    out.push_back(t);
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

inline bool is_keyword(const std::string& s) {
  static const char* kws[] = {"fun", "Fun",  "par",    "wit", "inj0",   "inj1",   "case", "excase",
                              "efq", "abort", "pi0",   "pi1", "forall", "exists", "bot"};
  for (const char* k : kws)
    if (s == k) return true;
  return false;
}

inline bool upper_initial(const std::string& s) { return !s.empty() && std::isupper(static_cast<unsigned char>(s[0])); }

}  // namespace detail

class Parser {
 public:
  Parser(std::string_view src, const Signature& sig) : toks_(detail::tokenize(src)), sig_(sig) {}

  bool at_end() const { return peek().kind == detail::Token::End; }
  void expect_end() {
    if (!at_end()) error("unexpected '" + peek().text + "'");
  }

  bool peek_ident(const char* word) const { return peek().kind == detail::Token::Ident && peek().text == word; }
  bool peek_sym(const char* s) const { return peek().kind == detail::Token::Sym && peek().text == s; }
  bool accept_sym(const char* s) {
    if (!peek_sym(s)) return false;
    ++pos_;
    return true;
  }
  bool accept_kw(const char* s) {
    if (!peek_ident(s)) return false;
    ++pos_;
    return true;
  }
  void expect_sym(const char* s) {
    if (!accept_sym(s)) error(std::string("expected '") + s + "'");
  }

  std::string name() {
    const auto& t = peek();
    if (t.kind != detail::Token::Ident || detail::is_keyword(t.text)) error("expected a name");
    ++pos_;
    return t.text;
  }

  [[noreturn]] void error(const std::string& msg) const {
    const auto& t = peek();
    std::string near = t.kind == detail::Token::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(t.line, t.column, msg + " near " + near);
  }

  // -- individual terms ------------------------------------------------------

  IndTerm ind_term() {
    std::string n = name();
    if (!bound(ind_scope_, n)) {
      if (auto arity = sig_.function_arity(n)) {
        expect_sym("(");
        std::vector<IndTerm> args;
        do args.push_back(ind_term());
        while (accept_sym(","));
        expect_sym(")");
        if (static_cast<int>(args.size()) != *arity)
          error("function " + n + " expects " + std::to_string(*arity) + " arguments");
        return ind_fun(n, std::move(args));
      }
      if (sig_.is_constant(n)) return ind_fun(n);
    }
    return ind_var(n);
  }

  // -- formulas --------------------------------------------------------------

  Formula formula() {
    Formula l = disjunction();
    if (accept_sym("->")) return imp(l, formula());
    return l;
  }

  // -- proof terms -----------------------------------------------------------

  Term term() {
    Term l = no_par();
    if (!accept_kw("par")) return l;
    std::string a;
    Formula left, right;
    if (accept_sym("[")) {
      a = name();
      expect_sym(":");
      left = formula();
      if (accept_sym(",")) right = formula();
      expect_sym("]");
      if (left->kind != FormulaKind::Imp) error("communication variable needs an implication");
    } else {
      a = name();
    }
    Term r = term();
    return par(a, l, r, left, right);
  }

 private:
  const detail::Token& peek() const { return toks_[pos_]; }

  static bool bound(const std::vector<std::string>& scope, const std::string& n) {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (*it == n) return true;
    return false;
  }

  template <class F>
  auto scoped(std::vector<std::string>& scope, const std::string& n, F&& body) {
    scope.push_back(n);
    auto r = body();
    scope.pop_back();
    return r;
  }

  Formula disjunction() {
    Formula l = conjunction();
    if (accept_sym("\\/")) return disj(l, disjunction());
    return l;
  }

  Formula conjunction() {
    Formula l = unary();
    if (accept_sym("/\\")) return conj(l, conjunction());
    return l;
  }

  Formula unary() {
    if (accept_sym("~")) return neg(unary());
    return primary();
  }

  Formula primary() {
    if (accept_kw("bot")) return falsum();
    if (accept_sym("(")) {
      Formula f = formula();
      expect_sym(")");
      return f;
    }
    bool is_forall = peek_ident("forall");
    if (is_forall || peek_ident("exists")) {
      ++pos_;
      std::string v = name();
      expect_sym(".");
      if (!detail::upper_initial(v)) {
        Formula body = scoped(ind_scope_, v, [&] { return formula(); });
        return is_forall ? forall_ind(v, body) : exists_ind(v, body);
      }
      Formula body = scoped(pred_scope_, v, [&] { return formula(); });
      if (is_forall) return forall_pred(v, body);
      return second_order_exists(v, body);
    }
    std::string p = name();
    std::vector<IndTerm> args;
    if (accept_sym("(")) {
      do args.push_back(ind_term());
      while (accept_sym(","));
      expect_sym(")");
    }
    if (bound(pred_scope_, p) || (!sig_.predicate_arity(p) && detail::upper_initial(p))) {
      if (args.size() != 1) error("predicate variable " + p + " takes exactly one argument");
      return pred_var_atom(p, args[0]);
    }
    auto arity = sig_.predicate_arity(p);
    if (!arity) error("unknown predicate " + p);
    if (static_cast<int>(args.size()) != *arity)
      error("predicate " + p + " expects " + std::to_string(*arity) + " arguments");
    return atom(p, std::move(args));
  }

  Formula second_order_exists(const std::string& X, const Formula& body) {
    if (sig_.constants().empty()) error("exists over a predicate variable needs a declared constant");
    IndTerm c = ind_fun(sig_.constants().front().name);
    NameSet avoid = body->free_pred;
    avoid.insert(X);
    for (const auto& s : pred_scope_) avoid.insert(s);
    std::string Y = fresh_name("Y", avoid);
    Formula yc = pred_var_atom(Y, c);
    return forall_pred(Y, imp(forall_pred(X, imp(body, yc)), yc));
  }

  Formula bracket_formula() {
    expect_sym("[");
    Formula f = formula();
    expect_sym("]");
    return f;
  }

  Term no_par() {
    if (accept_kw("fun")) {
      if (accept_sym("[")) {
        std::string al = name();
        expect_sym("]");
        expect_sym("=>");
        return ind_lam(al, scoped(ind_scope_, al, [&] { return term(); }));
      }
      std::string x = name();
      Formula ann;
      if (accept_sym(":")) ann = formula();
      expect_sym("=>");
      return lam(x, ann, term());
    }
    if (accept_kw("Fun")) {
      std::string X = name();
      if (!detail::upper_initial(X)) error("predicate variable must start with an upper-case letter");
      expect_sym("=>");
      return pred_lam(X, scoped(pred_scope_, X, [&] { return term(); }));
    }
    return spine();
  }

  Term spine() {
    Term t = head();
    while (true) {
      if (accept_sym("[")) {
        IndTerm m = ind_term();
        expect_sym("]");
        t = ind_app(t, m);
      } else if (accept_kw("pi0")) {
        t = proj(t, 0);
      } else if (accept_kw("pi1")) {
        t = proj(t, 1);
      } else if (accept_kw("case")) {
        t = case_frame(t);
      } else if (accept_kw("excase")) {
        t = ex_case_frame(t);
      } else if (accept_sym("{")) {
        std::string al = name();
        expect_sym(".");
        Formula b = scoped(ind_scope_, al, [&] { return formula(); });
        expect_sym("}");
        t = pred_app(t, PredAbs{al, b});
      } else if (starts_atom()) {
        t = app(t, atom_term());
      } else {
        return t;
      }
    }
  }

  Term case_frame(const Term& scrutinee) {
    expect_sym("[");
    std::string x = name();
    Formula xa;
    if (accept_sym(":")) xa = formula();
    expect_sym("=>");
    Term l = term();
    expect_sym("|");
    std::string y = name();
    Formula ya;
    if (accept_sym(":")) ya = formula();
    expect_sym("=>");
    Term r = term();
    expect_sym("]");
    return case_of(scrutinee, x, xa, l, y, ya, r);
  }

  Term ex_case_frame(const Term& scrutinee) {
    expect_sym("[");
    std::string al = name();
    expect_sym(",");
    std::string x = name();
    ind_scope_.push_back(al);
    Formula xa;
    if (accept_sym(":")) xa = formula();
    expect_sym("=>");
    Term body = term();
    ind_scope_.pop_back();
    expect_sym("]");
    return ex_case(scrutinee, al, x, xa, body);
  }

  bool starts_atom() const {
    const auto& t = peek();
    if (t.kind == detail::Token::Ident) return !detail::is_keyword(t.text) || t.text == "abort";
    return peek_sym("(") || peek_sym("<");
  }

  Term head() {
    if (peek_ident("inj0") || peek_ident("inj1")) {
      int i = peek().text == "inj0" ? 0 : 1;
      ++pos_;
      Formula ann = peek_sym("[") ? bracket_formula() : nullptr;
      return inj(i, atom_term(), ann);
    }
    if (accept_kw("wit")) {
      Formula ann = peek_sym("[") ? bracket_formula() : nullptr;
      IndTerm m = ind_term();
      return witness(m, atom_term(), ann);
    }
    if (accept_kw("efq")) {
      Formula ann = peek_sym("[") ? bracket_formula() : nullptr;
      return efq(atom_term(), ann);
    }
    return atom_term();
  }

  Term atom_term() {
    if (accept_sym("(")) {
      Term t = term();
      expect_sym(")");
      return t;
    }
    if (accept_sym("<")) {
      Term l = term();
      expect_sym(",");
      Term r = term();
      expect_sym(">");
      return pair(l, r);
    }
    if (accept_kw("abort")) {
      Formula ann = peek_sym("[") ? bracket_formula() : nullptr;
      if (ann && ann->kind != FormulaKind::Imp) error("abort needs an implication");
      return abort_const(ann);
    }
    return var(name());
  }

  std::vector<detail::Token> toks_;
  std::size_t pos_ = 0;
  const Signature& sig_;
  std::vector<std::string> ind_scope_;
  std::vector<std::string> pred_scope_;
};

inline Formula parse_formula(std::string_view src, const Signature& sig = Signature::default_signature()) {
  Parser p(src, sig);
  Formula f = p.formula();
  p.expect_end();
  return f;
}

inline Term parse_term(std::string_view src, const Signature& sig = Signature::default_signature()) {
  Parser p(src, sig);
  Term t = p.term();
  p.expect_end();
  return t;
}

inline IndTerm parse_ind_term(std::string_view src, const Signature& sig = Signature::default_signature()) {
  Parser p(src, sig);
  IndTerm m = p.ind_term();
  p.expect_end();
  return m;
}

// ---------------------------------------------------------------------------
// Signature files: lines `const c0 c1`, `fun f/1 g/2`, `pred P/1 R/2`.

inline Signature parse_signature(std::string_view src) {
  Signature sig;
  std::istringstream in{std::string(src)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream words(line);
    std::string kind;
    if (!(words >> kind)) continue;
    std::string item;
    while (words >> item) {
      try {
        if (kind == "const") {
          sig.add_constant(item);
          continue;
        }
        auto slash = item.find('/');
        if (slash == std::string::npos) throw SyntaxError(lineno, 1, "expected name/arity, got " + item);
        std::string n = item.substr(0, slash);
        int arity = std::stoi(item.substr(slash + 1));
        if (kind == "fun")
          sig.add_function(n, arity);
        else if (kind == "pred")
          sig.add_predicate(n, arity);
        else
          throw SyntaxError(lineno, 1, "unknown declaration kind " + kind);
      } catch (const std::invalid_argument& e) {
        throw SyntaxError(lineno, 1, e.what());
      } catch (const std::out_of_range& e) {
        throw SyntaxError(lineno, 1, e.what());
      }
    }
  }
  return sig;
}

// ---------------------------------------------------------------------------
// .lct documents

/// hyp x : A;  goal A;  flavor lcstar;  followed by the term. Lines of the
/// form `#@ key: value` are collected as metadata.
struct Document {
  Context context;
  Formula goal;
  std::optional<Flavor> flavor;
  Term term;
  std::map<std::string, std::string> meta;
};

inline std::map<std::string, std::string> parse_metadata(std::string_view src) {
  std::map<std::string, std::string> meta;
  std::istringstream in{std::string(src)};
  std::string line;
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    std::string l = trim(line);
    if (l.rfind("#@", 0) != 0) continue;
    auto colon = l.find(':');
    if (colon == std::string::npos) continue;
    meta[trim(l.substr(2, colon - 2))] = trim(l.substr(colon + 1));
  }
  return meta;
}

inline Document parse_document(std::string_view src, const Signature& sig = Signature::default_signature()) {
  Document doc;
  doc.meta = parse_metadata(src);
  Parser p(src, sig);
  while (true) {
    if (p.accept_kw("hyp")) {
      std::string x = p.name();
      p.expect_sym(":");
      Formula a = p.formula();
      p.expect_sym(";");
      if (doc.context.find(x)) p.error("hypothesis " + x + " declared twice");
      doc.context.add(x, a);
    } else if (p.accept_kw("goal")) {
      doc.goal = p.formula();
      p.expect_sym(";");
    } else if (p.accept_kw("flavor")) {
      std::string f = p.name();
      auto fl = parse_flavor(f);
      if (!fl) p.error("unknown flavor " + f);
      doc.flavor = fl;
      p.expect_sym(";");
    } else {
      break;
    }
  }
  doc.term = p.term();
  p.accept_sym(";");
  p.expect_end();
  return doc;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Document load_document(const std::string& path, const Signature& sig = Signature::default_signature()) {
  return parse_document(read_file(path), sig);
}

/// The least flavor admitting everything that occurs in the document.
inline Flavor minimal_flavor(const Document& doc) {
  bool star = contains_abort(doc.term);
  bool second = !doc.term->free_pred.empty();
  std::vector<Term> todo{doc.term};
  while (!todo.empty() && !second) {
    Term t = todo.back();
    todo.pop_back();
    if (t->kind == TermKind::PredLam || t->kind == TermKind::PredApp) second = true;
    if ((t->ann && is_second_order(t->ann)) || (t->ann2 && is_second_order(t->ann2))) second = true;
    for (const auto& k : t->kids) todo.push_back(k);
  }
  if (doc.goal && is_second_order(doc.goal)) second = true;
  for (const auto& [x, a] : doc.context.entries())
    if (is_second_order(a)) second = true;
  if (second) return star ? Flavor::LC2Star : Flavor::LC2;
  return star ? Flavor::LCStar : Flavor::LC;
}

inline Flavor document_flavor(const Document& doc) { return doc.flavor ? *doc.flavor : minimal_flavor(doc); }

}  // namespace dlc
