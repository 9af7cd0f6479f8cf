#include "recall/parser.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace recall {

std::string ParseDiagnostic::str() const {
  std::ostringstream os;
  os << line << ':' << column << ": " << (is_error() ? "error" : "warning") << ": " << message;
  return os.str();
}

namespace {

enum class Tok {
  Ident,
  LBrace,
  RBrace,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Semi,
  Hat,
  XChoice,
  Amp,
  Dot,
  Plus,
  Bang,
  Star,
  Zero,
  One,
  RepOpen,
  RepClose,
  Top,
  Bottom,
  End,
  Bad,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Hat: return "'^'";
    case Tok::XChoice: return "'(+)'";
    case Tok::Amp: return "'&'";
    case Tok::Dot: return "'.'";
    case Tok::Plus: return "'+'";
    case Tok::Bang: return "'!'";
    case Tok::Star: return "'*'";
    case Tok::Zero: return "'0'";
    case Tok::One: return "'1'";
    case Tok::RepOpen: return "'_/'";
    case Tok::RepClose: return "'/_'";
    case Tok::Top: return "'top'";
    case Tok::Bottom: return "'bottom'";
    case Tok::End: return "end of input";
    case Tok::Bad: return "invalid token";
  }
  return "?";
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

bool reserved(const std::string& s) { return s == "O" || s == "P" || s == "F" || s == "top" || s == "bottom"; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t = next();
      out.push_back(t);
      if (t.kind == Tok::End) break;
    }
    return out;
  }

 private:
  char peek(std::size_t ahead = 0) const { return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0'; }

  void advance(std::size_t n = 1) {
    for (std::size_t k = 0; k < n && pos_ < text_.size(); ++k) {
      char c = text_[pos_++];
      if (c == '\n') {
        ++line_;
        col_ = 1;
      } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
        ++col_;
      }
    }
  }

  void skip_space() {
    for (;;) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < text_.size() && peek() != '\n') advance();
      } else {
        return;
      }
    }
  }

  bool starts_with(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

  Token next() {
    Token t{Tok::End, {}, line_, col_};
    if (pos_ >= text_.size()) return t;
    auto simple = [&](Tok k, std::size_t n) {
      t.kind = k;
      t.text = std::string(text_.substr(pos_, n));
      advance(n);
      return t;
    };
    char c = peek();
    if (ident_start(c)) {
      std::size_t start = pos_;
      while (ident_char(peek())) advance();
      t.text = std::string(text_.substr(start, pos_ - start));
      t.kind = t.text == "top" ? Tok::Top : t.text == "bottom" ? Tok::Bottom : Tok::Ident;
      return t;
    }
    if (starts_with("(+)")) return simple(Tok::XChoice, 3);
    if (starts_with("_/")) return simple(Tok::RepOpen, 2);
    if (starts_with("/_")) return simple(Tok::RepClose, 2);
    if (starts_with("⊤")) return simple(Tok::Top, 3);
    if (starts_with("⊥")) return simple(Tok::Bottom, 3);
    switch (c) {
      case '{': return simple(Tok::LBrace, 1);
      case '}': return simple(Tok::RBrace, 1);
      case '(': return simple(Tok::LParen, 1);
      case ')': return simple(Tok::RParen, 1);
      case '[': return simple(Tok::LBracket, 1);
      case ']': return simple(Tok::RBracket, 1);
      case ',': return simple(Tok::Comma, 1);
      case ';': return simple(Tok::Semi, 1);
      case '^': return simple(Tok::Hat, 1);
      case '&': return simple(Tok::Amp, 1);
      case '.': return simple(Tok::Dot, 1);
      case '+': return simple(Tok::Plus, 1);
      case '!': return simple(Tok::Bang, 1);
      case '*': return simple(Tok::Star, 1);
      case '0':
        if (!ident_char(peek(1))) return simple(Tok::Zero, 1);
        break;
      case '1':
        if (!ident_char(peek(1))) return simple(Tok::One, 1);
        break;
      default:
        break;
    }
    // One bad code point (or a digit run) becomes a single Bad token.
    std::size_t n = 1;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (ident_char(peek(n))) ++n;
    } else {
      while ((static_cast<unsigned char>(peek(n)) & 0xC0) == 0x80) ++n;
    }
    return simple(Tok::Bad, n);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct SyntaxError : std::runtime_error {
  SyntaxError(const Token& at, const std::string& msg) : std::runtime_error(msg), line(at.line), column(at.column) {}
  int line;
  int column;
};

enum class Family { None, Obligation, Permission };

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ParseResult run() {
    ParseResult result;
    ConflictRelations conflicts;
    std::vector<Formula> clauses;

    if (at().kind == Tok::Ident && at().text == "conflict") {
      const std::size_t start = pos_;
      try {
        parse_header(conflicts);
      } catch (const SyntaxError& e) {
        pos_ = start;
        report(e, header_end());
      }
    }
    while (at().kind != Tok::End) {
      const std::size_t start = pos_;
      try {
        Formula f = parse_formula();
        expect(Tok::Semi, "to end the clause");
        clauses.push_back(std::move(f));
      } catch (const SyntaxError& e) {
        pos_ = start;
        report(e, clause_end());
      }
    }
    if (clauses.empty() && !has_error_) {
      diags_.push_back({ParseDiagnostic::Severity::Error, at().line, at().column, "contract has no clauses"});
      has_error_ = true;
    }
    result.diagnostics = std::move(diags_);
    if (!has_error_) result.spec = ContractSpec::from_clauses(std::move(clauses), std::move(conflicts));
    return result;
  }

 private:
  const Token& at() const { return toks_[pos_]; }
  const Token& take() {
    const Token& t = toks_[pos_];
    if (t.kind != Tok::End) ++pos_;
    return t;
  }
  bool accept(Tok k) {
    if (at().kind != k) return false;
    take();
    return true;
  }

  [[noreturn]] void unexpected(const std::string& wanted) const {
    const Token& t = at();
    std::string got = t.kind == Tok::Bad || t.kind == Tok::Ident ? "'" + t.text + "'" : describe(t.kind);
    if (t.kind == Tok::Bad) throw SyntaxError(t, "unknown token " + got);
    throw SyntaxError(t, "expected " + wanted + ", found " + got);
  }

  const Token& expect(Tok k, const std::string& why = {}) {
    if (at().kind != k) unexpected(std::string(describe(k)) + (why.empty() ? "" : " " + why));
    return take();
  }

  void error(const SyntaxError& e) {
    diags_.push_back({ParseDiagnostic::Severity::Error, e.line, e.column, e.what()});
    has_error_ = true;
  }

  void warn(const Token& at, std::string msg) {
    diags_.push_back({ParseDiagnostic::Severity::Warning, at.line, at.column, std::move(msg)});
  }

  // Index just past the `;` ending the clause that starts at pos_.
  std::size_t clause_end() const {
    std::size_t k = pos_;
    while (toks_[k].kind != Tok::End && toks_[k].kind != Tok::Semi) ++k;
    return toks_[k].kind == Tok::Semi ? k + 1 : k;
  }

  // Index just past the `};` closing the header that starts at pos_.
  std::size_t header_end() const {
    int depth = 0;
    for (std::size_t k = pos_; toks_[k].kind != Tok::End; ++k) {
      if (toks_[k].kind == Tok::LBrace) ++depth;
      if (toks_[k].kind == Tok::RBrace && --depth <= 0) {
        return toks_[k + 1].kind == Tok::Semi ? k + 2 : k + 1;
      }
    }
    return toks_.size() - 1;
  }

  // Reports the first invalid token of the skipped region if there is one,
  // since the syntax error is usually a consequence of it, then resumes
  // after the region.
  void report(const SyntaxError& e, std::size_t resume) {
    auto first = toks_.begin() + static_cast<std::ptrdiff_t>(pos_);
    auto last = toks_.begin() + static_cast<std::ptrdiff_t>(resume);
    auto bad = std::find_if(first, last, [](const Token& t) { return t.kind == Tok::Bad; });
    if (bad != last) {
      error(SyntaxError(*bad, "unknown token '" + bad->text + "'"));
    } else {
      error(e);
    }
    pos_ = resume;
  }

  std::string expect_name(const char* what) {
    if (at().kind == Tok::Top || at().kind == Tok::Bottom || (at().kind == Tok::Ident && reserved(at().text))) {
      throw SyntaxError(at(), "'" + at().text + "' is reserved and cannot name " + std::string(what));
    }
    if (at().kind != Tok::Ident) unexpected(std::string(what) + " name");
    return take().text;
  }

  // conflict { global { (a,b), ... }; relativized { ... }; };
  void parse_header(ConflictRelations& out) {
    take();
    expect(Tok::LBrace, "after 'conflict'");
    while (at().kind == Tok::Ident) {
      const Token& section = take();
      bool global = section.text == "global";
      if (!global && section.text != "relativized") {
        throw SyntaxError(section, "unknown conflict section '" + section.text + "', expected 'global' or 'relativized'");
      }
      expect(Tok::LBrace, "after '" + section.text + "'");
      if (at().kind != Tok::RBrace) {
        do {
          expect(Tok::LParen, "to open an action pair");
          std::string a = expect_name("an action");
          expect(Tok::Comma, "between the actions of a pair");
          std::string b = expect_name("an action");
          expect(Tok::RParen, "to close an action pair");
          global ? out.add_global(a, b) : out.add_relativized(a, b);
        } while (accept(Tok::Comma));
      }
      expect(Tok::RBrace, "to close the '" + section.text + "' section");
      expect(Tok::Semi, "after the '" + section.text + "' section");
    }
    expect(Tok::RBrace, "to close the conflict header");
    expect(Tok::Semi, "after the conflict header");
  }

  // formula := conj ('(+)' conj)*
  Formula parse_formula() {
    const Token& first = at();
    Formula f = parse_conj();
    if (at().kind != Tok::XChoice) return f;
    std::vector<Formula> alts{std::move(f)};
    Family fam = family(alts.front());
    if (fam == Family::None) throw SyntaxError(first, "'(+)' only combines obligation clauses or permission clauses");
    while (at().kind == Tok::XChoice) {
      take();
      const Token& start = at();
      Formula g = parse_conj();
      Family gf = family(g);
      if (gf == Family::None) throw SyntaxError(start, "'(+)' only combines obligation clauses or permission clauses");
      if (gf != fam) throw SyntaxError(start, "'(+)' cannot mix obligation and permission clauses");
      alts.push_back(std::move(g));
    }
    return Formula::xchoice(std::move(alts));
  }

  static Family family(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::Obligation:
        return Family::Obligation;
      case FormulaKind::Permission:
        return Family::Permission;
      case FormulaKind::And:
      case FormulaKind::XChoice: {
        Family fam = family(f.children().front());
        for (const auto& c : f.children()) {
          if (family(c) != fam) return Family::None;
        }
        return fam;
      }
      default:
        return Family::None;
    }
  }

  Formula parse_conj() {
    Formula f = parse_unary();
    if (at().kind != Tok::Hat) return f;
    std::vector<Formula> parts{std::move(f)};
    while (accept(Tok::Hat)) parts.push_back(parse_unary());
    return Formula::conjunction(std::move(parts));
  }

  Formula parse_unary() {
    const Token& start = at();
    switch (start.kind) {
      case Tok::Top:
        take();
        return Formula::top();
      case Tok::Bottom:
        take();
        return Formula::bottom();
      case Tok::LParen: {
        take();
        Formula f = parse_formula();
        expect(Tok::RParen, "to close the parenthesised clause");
        return f;
      }
      default:
        break;
    }
    Relativization rel = Relativization::global();
    if (start.kind == Tok::LBrace) rel = parse_relativization();
    if (at().kind == Tok::LBracket) {
      take();
      Action trigger = parse_action(true);
      expect(Tok::RBracket, "to close the dynamic modality");
      Formula body = parse_unary();
      return Formula::dynamic(std::move(rel), std::move(trigger), std::move(body));
    }
    if (at().kind == Tok::Ident && (at().text == "O" || at().text == "P" || at().text == "F")) {
      const Token& op_tok = take();
      Deontic op = op_tok.text == "O" ? Deontic::O : op_tok.text == "P" ? Deontic::P : Deontic::F;
      expect(Tok::LParen, "after '" + op_tok.text + "'");
      Action a = parse_action(false);
      expect(Tok::RParen, "to close the " + op_tok.text + " operator");
      std::optional<Formula> rep;
      if (at().kind == Tok::RepOpen) {
        const Token& rep_tok = take();
        if (op == Deontic::P) throw SyntaxError(rep_tok, "permission cannot carry a reparation");
        rep = parse_formula();
        expect(Tok::RepClose, "to close the reparation");
      }
      return Formula::deontic(op, std::move(rel), std::move(a), std::move(rep));
    }
    if (start.kind == Tok::LBrace) unexpected("'O', 'P', 'F' or '[' after a relativization");
    unexpected("a clause");
  }

  Relativization parse_relativization() {
    const Token& open = take();
    std::string i = expect_name("an individual");
    if (accept(Tok::RBrace)) return Relativization::performer(std::move(i));
    expect(Tok::Comma, "or '}' in relativization");
    std::string j = expect_name("an individual");
    if (at().kind == Tok::Comma) throw SyntaxError(at(), "a relativization names at most two individuals");
    expect(Tok::RBrace, "to close the relativization");
    if (i == j) warn(open, "self-directed relativization {" + i + "," + j + "}");
    return Relativization::directed(std::move(i), std::move(j));
  }

  // action := seq ('+' seq)* ; seq := conc ('.' conc)* ; conc := unary ('&' unary)*
  Action parse_action(bool dynamic) {
    Action a = parse_seq(dynamic);
    while (accept(Tok::Plus)) a = Action::choice(std::move(a), parse_seq(dynamic));
    return a;
  }

  Action parse_seq(bool dynamic) {
    Action a = parse_conc(dynamic);
    while (accept(Tok::Dot)) a = Action::sequence(std::move(a), parse_conc(dynamic));
    return a;
  }

  Action parse_conc(bool dynamic) {
    Action a = parse_act_unary(dynamic);
    while (accept(Tok::Amp)) a = Action::concurrent(std::move(a), parse_act_unary(dynamic));
    return a;
  }

  Action parse_act_unary(bool dynamic) {
    if (at().kind == Tok::Bang) {
      const Token& bang = take();
      if (!dynamic) throw SyntaxError(bang, "negation is only allowed in dynamic triggers");
      Action inner = parse_act_unary(dynamic);
      if (!negatable(inner)) {
        throw SyntaxError(bang, "negation of a choice or concurrency containing '.' or '*' is not supported");
      }
      return Action::negation(std::move(inner));
    }
    Action a = parse_primary(dynamic);
    while (at().kind == Tok::Star) {
      const Token& star = take();
      if (!dynamic) throw SyntaxError(star, "iteration is only allowed in dynamic triggers");
      a = Action::star(std::move(a));
    }
    return a;
  }

  static bool negatable(const Action& a) {
    switch (a.kind()) {
      case ActionKind::Sequence:
        return negatable(a.left()) && negatable(a.right());
      case ActionKind::Star:
      case ActionKind::Negation:
        return true;
      default:
        return a.is_step();
    }
  }

  Action parse_primary(bool dynamic) {
    switch (at().kind) {
      case Tok::Zero:
        take();
        return Action::zero();
      case Tok::One:
        take();
        return Action::one();
      case Tok::LParen: {
        take();
        Action a = parse_action(dynamic);
        expect(Tok::RParen, "to close the action");
        return a;
      }
      case Tok::Ident:
      case Tok::Top:
      case Tok::Bottom:
        return Action::atom(expect_name("an action"));
      default:
        unexpected("an action");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<ParseDiagnostic> diags_;
  bool has_error_ = false;
};

// Action precedence levels: + (0) < . (1) < & (2) < ! (3) < * and atoms (4).
int level(const Action& a) {
  switch (a.kind()) {
    case ActionKind::Choice: return 0;
    case ActionKind::Sequence: return 1;
    case ActionKind::Concurrent: return 2;
    case ActionKind::Negation: return 3;
    default: return 4;
  }
}

void render_action_at(const Action& a, int min_level, std::string& out) {
  bool paren = level(a) < min_level;
  if (paren) out += '(';
  switch (a.kind()) {
    case ActionKind::Zero:
      out += '0';
      break;
    case ActionKind::One:
      out += '1';
      break;
    case ActionKind::Atom:
      out += a.name();
      break;
    case ActionKind::Choice:
    case ActionKind::Sequence:
    case ActionKind::Concurrent: {
      int l = level(a);
      const char* sym = a.kind() == ActionKind::Choice ? "+" : a.kind() == ActionKind::Sequence ? "." : "&";
      render_action_at(a.left(), l, out);
      out += sym;
      render_action_at(a.right(), l + 1, out);
      break;
    }
    case ActionKind::Negation:
      out += '!';
      render_action_at(a.inner(), 3, out);
      break;
    case ActionKind::Star:
      // Star binds to a primary, so any composite operand is parenthesised.
      if (a.inner().is_leaf() || a.inner().kind() == ActionKind::Star) {
        render_action_at(a.inner(), 4, out);
      } else {
        out += '(';
        render_action_at(a.inner(), 0, out);
        out += ')';
      }
      out += '*';
      break;
  }
  if (paren) out += ')';
}

void render_into(const Formula& f, std::string& out);

void render_wrapped(const Formula& f, bool wrap, std::string& out) {
  if (wrap) out += '(';
  render_into(f, out);
  if (wrap) out += ')';
}

void render_into(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case FormulaKind::Top:
      out += "top";
      return;
    case FormulaKind::Bottom:
      out += "bottom";
      return;
    case FormulaKind::Obligation:
    case FormulaKind::Permission:
    case FormulaKind::Prohibition:
      out += f.rel().str();
      out += deontic_letter(f.op());
      out += '(';
      render_action_at(f.action(), 0, out);
      out += ')';
      if (const Formula* rep = f.reparation()) {
        out += " _/";
        render_into(*rep, out);
        out += "/_";
      }
      return;
    case FormulaKind::Dynamic: {
      out += f.rel().str();
      out += '[';
      render_action_at(f.trigger(), 0, out);
      out += ']';
      auto k = f.body().kind();
      render_wrapped(f.body(), k == FormulaKind::And || k == FormulaKind::XChoice, out);
      return;
    }
    case FormulaKind::And: {
      bool first = true;
      for (const auto& c : f.children()) {
        if (!first) out += " ^ ";
        first = false;
        auto k = c.kind();
        render_wrapped(c, k == FormulaKind::And || k == FormulaKind::XChoice, out);
      }
      return;
    }
    case FormulaKind::XChoice: {
      bool first = true;
      for (const auto& c : f.children()) {
        if (!first) out += " (+) ";
        first = false;
        render_wrapped(c, c.kind() == FormulaKind::XChoice, out);
      }
      return;
    }
  }
}

void render_pairs(const char* name, const std::set<ConflictRelations::Pair>& pairs, std::string& out) {
  if (pairs.empty()) return;
  out += "    ";
  out += name;
  out += " { ";
  bool first = true;
  for (const auto& [a, b] : pairs) {
    if (!first) out += ", ";
    first = false;
    out += "(" + a + ", " + b + ")";
  }
  out += " };\n";
}

}  // namespace

ParseResult parse(std::string_view text) { return Parser(Lexer(text).run()).run(); }

std::string render_action(const Action& a) {
  std::string out;
  render_action_at(a, 0, out);
  return out;
}

std::string render_formula(const Formula& f) {
  std::string out;
  render_into(f, out);
  return out;
}

std::string render(const ContractSpec& spec) {
  std::string out;
  if (!spec.conflicts.empty()) {
    out += "conflict {\n";
    render_pairs("global", spec.conflicts.global_pairs(), out);
    render_pairs("relativized", spec.conflicts.relativized_pairs(), out);
    out += "};\n";
  }
  for (const auto& c : spec.clauses) {
    render_into(c, out);
    out += ";\n";
  }
  return out;
}

}  // namespace recall
