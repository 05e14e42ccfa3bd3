#include "omq/parser.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>

#include "omq/errors.hpp"

namespace omq {
namespace {

bool is_ident_start(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) { return is_ident_start(c) || c == '\''; }

enum class Tok {
  kIdent,    // identifiers, keywords and numerals
  kVarMark,  // identifier with a leading '?', text excludes the '?'
  kArrow,    // ->
  kIf,       // :-
  kDot,
  kComma,
  kLParen,
  kRParen,
  kLBrace,
  kRBrace,
  kSlash,
  kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  SourceLocation where;
};

const char* describe(Tok k) {
  switch (k) {
    case Tok::kIdent: return "identifier";
    case Tok::kVarMark: return "variable";
    case Tok::kArrow: return "'->'";
    case Tok::kIf: return "':-'";
    case Tok::kDot: return "'.'";
    case Tok::kComma: return "','";
    case Tok::kLParen: return "'('";
    case Tok::kRParen: return "')'";
    case Tok::kLBrace: return "'{'";
    case Tok::kRBrace: return "'}'";
    case Tok::kSlash: return "'/'";
    case Tok::kEnd: return "end of input";
  }
  return "token";
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      SourceLocation at{line_, col_};
      if (pos_ >= text_.size()) {
        out.push_back({Tok::kEnd, "", at});
        return out;
      }
      char c = text_[pos_];
      if (c == '$' || (c == '_' && peek(1) == ':')) {
        std::string word(1, c);
        advance();
        while (pos_ < text_.size() &&
               (is_ident_char(text_[pos_]) || text_[pos_] == ':')) {
          word += text_[pos_];
          advance();
        }
        throw ReservedNameError("reserved name '" + word + "'", at);
      }
      if (c == '?') {
        advance();
        if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) {
          throw SyntaxError("expected a variable name after '?'", at);
        }
        out.push_back({Tok::kVarMark, ident(), at});
        continue;
      }
      if (is_ident_start(c)) {
        out.push_back({Tok::kIdent, ident(), at});
        continue;
      }
      if (c == '-' && peek(1) == '>') {
        advance();
        advance();
        out.push_back({Tok::kArrow, "->", at});
        continue;
      }
      if (c == ':' && peek(1) == '-') {
        advance();
        advance();
        out.push_back({Tok::kIf, ":-", at});
        continue;
      }
      Tok kind;
      switch (c) {
        case '.': kind = Tok::kDot; break;
        case ',': kind = Tok::kComma; break;
        case '(': kind = Tok::kLParen; break;
        case ')': kind = Tok::kRParen; break;
        case '{': kind = Tok::kLBrace; break;
        case '}': kind = Tok::kRBrace; break;
        case '/': kind = Tok::kSlash; break;
        default:
          throw SyntaxError(std::string("unexpected character '") + c + "'", at);
      }
      advance();
      out.push_back({kind, std::string(1, c), at});
    }
  }

 private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  std::string ident() {
    std::string out;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
      out += text_[pos_];
      advance();
    }
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

bool is_keyword(std::string_view s) {
  return s == "schema" || s == "tgds" || s == "query" || s == "database" ||
         s == "exists" || s == "true" || s == "false";
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Program run() {
    while (peek().kind != Tok::kEnd) {
      const Token& t = peek();
      if (t.kind == Tok::kIdent && t.text == "schema") {
        schema_block();
      } else if (t.kind == Tok::kIdent && t.text == "tgds") {
        tgds_block();
      } else if (t.kind == Tok::kIdent && t.text == "query") {
        query_clause();
      } else if (t.kind == Tok::kIdent && t.text == "database") {
        database_block();
      } else {
        throw SyntaxError("expected 'schema', 'tgds', 'query' or 'database'",
                          t.where);
      }
    }
    return std::move(prog_);
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  bool at_word(std::string_view w) const {
    return peek().kind == Tok::kIdent && peek().text == w;
  }

  const Token& expect(Tok kind) {
    const Token& t = next();
    if (t.kind != kind) {
      throw SyntaxError(std::string("expected ") + describe(kind) + ", found " +
                            (t.kind == Tok::kEnd ? describe(t.kind)
                                                 : "'" + t.text + "'"),
                        t.where);
    }
    return t;
  }

  void expect_word(std::string_view w) {
    const Token& t = next();
    if (t.kind != Tok::kIdent || t.text != w) {
      throw SyntaxError("expected '" + std::string(w) + "'", t.where);
    }
  }

  std::string name() {
    const Token& t = expect(Tok::kIdent);
    if (is_keyword(t.text)) {
      throw SyntaxError("keyword '" + t.text + "' used as a name", t.where);
    }
    return t.text;
  }

  Predicate declare(const std::string& name, std::uint32_t arity,
                    SourceLocation where) {
    Predicate p(name, arity);
    try {
      prog_.predicates.add(p);
    } catch (const ArityError&) {
      auto known = prog_.predicates.find(name);
      throw ArityError("predicate " + name + " has arity " +
                           std::to_string(known->arity()) +
                           " but is used with arity " + std::to_string(arity),
                       where);
    }
    return p;
  }

  void schema_block() {
    next();
    expect(Tok::kLBrace);
    if (peek().kind != Tok::kRBrace) {
      for (;;) {
        SourceLocation at = peek().where;
        std::string pred = name();
        expect(Tok::kSlash);
        const Token& n = expect(Tok::kIdent);
        if (n.text.empty() ||
            !std::all_of(n.text.begin(), n.text.end(),
                         [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
          throw SyntaxError("expected an arity", n.where);
        }
        auto p = declare(pred, static_cast<std::uint32_t>(std::stoul(n.text)), at);
        prog_.schema.add(p);
        if (peek().kind != Tok::kComma) break;
        next();
      }
    }
    expect(Tok::kRBrace);
  }

  Term term() {
    const Token& t = next();
    if (t.kind == Tok::kVarMark) return Term::variable(t.text);
    if (t.kind != Tok::kIdent) {
      throw SyntaxError("expected a term", t.where);
    }
    if (is_keyword(t.text)) {
      throw SyntaxError("keyword '" + t.text + "' used as a term", t.where);
    }
    return reads_as_variable(t.text) ? Term::variable(t.text)
                                     : Term::constant(t.text);
  }

  struct Located {
    Atom atom;
    SourceLocation where;
  };

  Located atom() {
    SourceLocation at = peek().where;
    std::string pred = name();
    expect(Tok::kLParen);
    std::vector<Term> args;
    if (peek().kind != Tok::kRParen) {
      for (;;) {
        args.push_back(term());
        if (peek().kind != Tok::kComma) break;
        next();
      }
    }
    expect(Tok::kRParen);
    auto p = declare(pred, static_cast<std::uint32_t>(args.size()), at);
    return {Atom(p, std::move(args)), at};
  }

  std::vector<Located> atoms() {
    std::vector<Located> out;
    out.push_back(atom());
    while (peek().kind == Tok::kComma) {
      next();
      out.push_back(atom());
    }
    return out;
  }

  static std::vector<Atom> strip(const std::vector<Located>& in) {
    std::vector<Atom> out;
    for (const auto& l : in) out.push_back(l.atom);
    return out;
  }

  void tgds_block() {
    next();
    std::string block = name();
    auto& list = prog_.tgds[block];
    expect(Tok::kLBrace);
    while (peek().kind != Tok::kRBrace) list.push_back(tgd());
    expect(Tok::kRBrace);
  }

  TGD tgd() {
    SourceLocation start = peek().where;
    std::vector<Located> body;
    if (at_word("true")) {
      next();
    } else {
      body = atoms();
    }
    expect(Tok::kArrow);
    std::vector<std::pair<Term, SourceLocation>> declared;
    if (at_word("exists")) {
      next();
      for (;;) {
        SourceLocation at = peek().where;
        Term v = term();
        if (!v.is_variable()) {
          throw SyntaxError("existential " + v.to_string() +
                                " is not a variable",
                            at);
        }
        declared.emplace_back(v, at);
        if (peek().kind != Tok::kComma) break;
        next();
      }
      expect(Tok::kDot);
    }
    auto head = atoms();
    expect(Tok::kDot);

    auto body_atoms = strip(body);
    auto head_atoms = strip(head);
    auto body_vars = variables_of(body_atoms);
    auto in_body = [&](const Term& v) {
      return std::find(body_vars.begin(), body_vars.end(), v) != body_vars.end();
    };
    for (const auto& [v, at] : declared) {
      if (in_body(v)) {
        throw SafetyError("existential variable " + v.to_string() +
                              " also occurs in the body",
                          at);
      }
    }
    for (const auto& l : head) {
      for (const auto& t : l.atom.args()) {
        if (!t.is_variable() || in_body(t)) continue;
        bool is_declared = std::any_of(
            declared.begin(), declared.end(),
            [&](const auto& d) { return d.first == t; });
        if (!is_declared) {
          throw SafetyError("head variable " + t.to_string() +
                                " occurs neither in the body nor in 'exists'",
                            l.where);
        }
      }
    }
    try {
      return TGD(std::move(body_atoms), std::move(head_atoms));
    } catch (const Error& e) {
      throw SafetyError(e.what(), start);
    }
  }

  void query_clause() {
    next();
    SourceLocation at = peek().where;
    std::string qname = name();
    expect(Tok::kLParen);
    std::vector<Term> answer;
    if (peek().kind != Tok::kRParen) {
      for (;;) {
        answer.push_back(term());
        if (peek().kind != Tok::kComma) break;
        next();
      }
    }
    expect(Tok::kRParen);
    expect(Tok::kIf);

    std::optional<CQ> cq;
    if (at_word("false")) {
      next();
    } else if (at_word("true")) {
      next();
      try {
        cq = CQ(answer, {});
      } catch (const SafetyError& e) {
        throw SafetyError(e.what(), at);
      }
    } else {
      auto body = atoms();
      try {
        cq = CQ(answer, strip(body));
      } catch (const SafetyError& e) {
        throw SafetyError(e.what(), at);
      }
    }
    expect(Tok::kDot);

    auto it = prog_.queries.find(qname);
    if (it == prog_.queries.end()) {
      it = prog_.queries.emplace(qname, UCQ(answer.size())).first;
    } else if (it->second.arity() != answer.size()) {
      throw ArityError("query " + qname + " has arity " +
                           std::to_string(it->second.arity()) +
                           " but this clause has arity " +
                           std::to_string(answer.size()),
                       at);
    }
    if (cq) it->second.add(std::move(*cq));
  }

  void database_block() {
    next();
    std::string dname = name();
    expect(Tok::kLBrace);
    std::vector<Atom> facts;
    while (peek().kind != Tok::kRBrace) {
      auto l = atom();
      if (!l.atom.is_fact()) {
        throw SafetyError("database atom " + l.atom.to_string() +
                              " contains a variable",
                          l.where);
      }
      facts.push_back(l.atom);
      expect(Tok::kDot);
    }
    expect(Tok::kRBrace);
    auto& db = prog_.databases[dname];
    auto merged = db.atoms();
    merged.insert(merged.end(), facts.begin(), facts.end());
    db = Database(std::move(merged));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Program prog_;
};

bool valid_identifier(std::string_view s) {
  if (s.empty() || !is_ident_start(s.front())) return false;
  return std::all_of(s.begin(), s.end(), is_ident_char);
}

// Maps variables whose names the parser cannot read back to fresh names.
Substitution readable(const std::vector<Term>& vars) {
  std::set<std::string, std::less<>> used;
  for (const auto& v : vars) used.emplace(v.name());
  Substitution out;
  std::size_t k = 0;
  for (const auto& v : vars) {
    if (valid_identifier(v.name()) && !is_keyword(v.name())) continue;
    std::string fresh;
    do {
      fresh = "V" + std::to_string(++k);
    } while (used.count(fresh));
    used.insert(fresh);
    out.bind(v, Term::variable(fresh));
  }
  return out;
}

std::string atoms_text(std::span<const Atom> atoms) {
  std::string out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i > 0) out += ", ";
    out += atom_text(atoms[i]);
  }
  return out;
}

std::string cq_text(std::string_view name, const CQ& raw) {
  const CQ q = raw.substitute(readable(raw.variables()));
  std::string out = "query " + std::string(name) + "(";
  for (std::size_t i = 0; i < q.answer().size(); ++i) {
    if (i > 0) out += ",";
    out += term_text(q.answer()[i]);
  }
  out += ") :- ";
  out += q.is_true() ? "true" : atoms_text(q.body());
  return out + ".";
}

}  // namespace

bool reads_as_variable(std::string_view name) {
  if (name.empty()) return false;
  char c = name.front();
  return c == '?' || std::isupper(static_cast<unsigned char>(c)) ||
         (c >= 'u' && c <= 'z');
}

std::string term_text(const Term& t) {
  if (!t.is_variable()) return t.to_string();
  std::string n(t.name());
  return reads_as_variable(n) ? n : "?" + n;
}

std::string atom_text(const Atom& a) {
  std::string out(a.predicate().name());
  out += '(';
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (i > 0) out += ',';
    out += term_text(a[i]);
  }
  return out + ')';
}

std::string tgd_text(const TGD& raw) {
  const TGD t = raw.substitute(readable(raw.variables()));
  std::string out = t.is_fact() ? "true" : atoms_text(t.body());
  out += " -> ";
  if (!t.existentials().empty()) {
    out += "exists ";
    for (std::size_t i = 0; i < t.existentials().size(); ++i) {
      if (i > 0) out += ",";
      out += term_text(t.existentials()[i]);
    }
    out += " . ";
  }
  return out + atoms_text(t.head()) + ".";
}

std::string ucq_text(std::string_view name, const UCQ& q) {
  if (q.empty()) {
    std::string out = "query " + std::string(name) + "(";
    for (std::size_t i = 0; i < q.arity(); ++i) {
      if (i > 0) out += ",";
      out += "X" + std::to_string(i + 1);
    }
    return out + ") :- false.\n";
  }
  std::string out;
  for (const auto& cq : q.disjuncts()) out += cq_text(name, cq) + "\n";
  return out;
}

std::string database_text(std::string_view name, const Database& db) {
  std::string out = "database " + std::string(name) + " {";
  for (const auto& a : db.atoms()) out += " " + atom_text(a) + ".";
  return out + " }";
}

std::string serialize_program(const Program& p) {
  std::string out = "schema {";
  for (std::size_t i = 0; i < p.schema.size(); ++i) {
    out += i == 0 ? " " : ", ";
    out += p.schema.predicates()[i].to_string();
  }
  out += " }\n";
  for (const auto& [name, tgds] : p.tgds) {
    if (tgds.empty()) {
      out += "tgds " + name + " { }\n";
      continue;
    }
    out += "tgds " + name + " {\n";
    for (const auto& t : tgds) out += "  " + tgd_text(t) + "\n";
    out += "}\n";
  }
  for (const auto& [name, q] : p.queries) out += ucq_text(name, q);
  for (const auto& [name, db] : p.databases) {
    out += database_text(name, db) + "\n";
  }
  return out;
}

Program parse_program(std::string_view text) {
  return Parser(Lexer(text).run()).run();
}

const std::vector<TGD>& Program::tgd_block(std::string_view name) const {
  auto it = tgds.find(name);
  if (it == tgds.end()) throw NameError("no tgd block named " + std::string(name));
  return it->second;
}

const UCQ& Program::query(std::string_view name) const {
  auto it = queries.find(name);
  if (it == queries.end()) throw NameError("no query named " + std::string(name));
  return it->second;
}

const Database& Program::database(std::string_view name) const {
  auto it = databases.find(name);
  if (it == databases.end()) {
    throw NameError("no database named " + std::string(name));
  }
  return it->second;
}

std::vector<TGD> Program::all_tgds() const {
  std::vector<TGD> out;
  for (const auto& [name, list] : tgds) out.insert(out.end(), list.begin(), list.end());
  return out;
}

OMQ Program::omq(std::string_view query_name, std::string_view tgds_name) const {
  return OMQ(schema, tgds_name.empty() ? all_tgds() : tgd_block(tgds_name),
             query(query_name));
}

}  // namespace omq
