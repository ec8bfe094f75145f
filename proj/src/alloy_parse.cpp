#include "eb2alloy/alloy_parse.hpp"

#include <cctype>
#include <unordered_set>

namespace eb2alloy {

namespace {

enum class ATok { Ident, Int, Op, Keyword, End };

struct AToken {
  ATok kind;
  std::string text;
  long long value = 0;
  SourcePos pos;
};

const std::unordered_set<std::string>& alloy_keywords() {
  static const std::unordered_set<std::string> kw = {
      "module", "open", "as", "sig", "abstract", "one", "extends", "in", "fact", "pred",
      "fun", "assert", "check", "for", "exactly", "int", "and", "or", "implies", "else",
      "not", "all", "some", "no", "lone", "let", "univ", "iden", "none", "set",
  };
  return kw;
}

std::vector<AToken> lex_alloy(const std::string& src) {
  std::vector<AToken> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  const std::size_t n = src.size();
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (src[i + j] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += k;
  };
  auto ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  auto ident_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  };
  while (i < n) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') advance(1);
      continue;
    }
    SourcePos pos{line, col};
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < n && ident_char(src[j])) ++j;
      // qualified names: util/ordering, ord/next
      while (j < n && src[j] == '/' && j + 1 < n && ident_start(src[j + 1])) {
        ++j;
        while (j < n && ident_char(src[j])) ++j;
      }
      std::string word = src.substr(i, j - i);
      advance(j - i);
      bool kw = word.find('/') == std::string::npos && alloy_keywords().count(word) > 0;
      out.push_back({kw ? ATok::Keyword : ATok::Ident, word, 0, pos});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1])) && !out.empty() &&
         (out.back().kind == ATok::Op || out.back().kind == ATok::Keyword) && out.back().text != "]" &&
         out.back().text != ")" && out.back().text != "}")) {
      std::size_t j = i + (c == '-' ? 1 : 0);
      while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      std::string digits = src.substr(i, j - i);
      advance(j - i);
      out.push_back({ATok::Int, digits, std::stoll(digits), pos});
      continue;
    }
    auto two = [&](const char* op) { return src.compare(i, 2, op) == 0; };
    const char* ops2[] = {"->", "<:", ":>", "<=", ">=", "&&", "||"};
    bool matched = false;
    for (const char* op : ops2) {
      if (two(op)) {
        out.push_back({ATok::Op, op, 0, pos});
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    const char* ops1 = "+-&.~[]{}(),|!=<>:";
    for (const char* p = ops1; *p; ++p) {
      if (c == *p) {
        out.push_back({ATok::Op, std::string(1, c), 0, pos});
        advance(1);
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(pos, std::string("alloy: unexpected character '") + c + "'");
  }
  out.push_back({ATok::End, "<eof>", 0, {line, col}});
  return out;
}

class AlloyParser {
 public:
  explicit AlloyParser(const std::string& src) : toks_(lex_alloy(src)) {}

  AlloyModule parse_module() {
    AlloyModule m;
    expect_keyword("module");
    m.name = expect_ident();
    while (at_keyword("open")) {
      advance();
      m.opens.push_back(parse_open());
    }
    while (!at_end()) m.decls.push_back(parse_decl());
    return m;
  }

  Decl parse_single_decl() {
    Decl d = parse_decl();
    if (!at_end()) throw ParseError(peek().pos, "alloy: trailing input after declaration");
    return d;
  }

  AlloyExprPtr parse_single_formula() {
    AlloyExprPtr f = parse_formula();
    if (!at_end()) throw ParseError(peek().pos, "alloy: trailing input after formula");
    return f;
  }

 private:
  std::vector<AToken> toks_;
  std::size_t pos_ = 0;

  const AToken& peek(std::size_t k = 0) const {
    std::size_t i = pos_ + k;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at_end() const { return peek().kind == ATok::End; }
  const AToken& advance() { return toks_[pos_++]; }
  bool at_keyword(const std::string& kw) const {
    return peek().kind == ATok::Keyword && peek().text == kw;
  }
  bool at_op(const std::string& op) const { return peek().kind == ATok::Op && peek().text == op; }
  bool eat_keyword(const std::string& kw) {
    if (!at_keyword(kw)) return false;
    advance();
    return true;
  }
  bool eat_op(const std::string& op) {
    if (!at_op(op)) return false;
    advance();
    return true;
  }
  void expect_keyword(const std::string& kw) {
    if (!eat_keyword(kw)) throw ParseError(peek().pos, "alloy: expected '" + kw + "', got '" + peek().text + "'");
  }
  void expect_op(const std::string& op) {
    if (!eat_op(op)) throw ParseError(peek().pos, "alloy: expected '" + op + "', got '" + peek().text + "'");
  }
  std::string expect_ident() {
    if (peek().kind != ATok::Ident)
      throw ParseError(peek().pos, "alloy: expected identifier, got '" + peek().text + "'");
    return advance().text;
  }

  std::string parse_open() {
    // open util/ordering[State] as ord
    std::string s = expect_ident();
    if (eat_op("[")) {
      s += '[';
      s += expect_ident();
      while (eat_op(",")) {
        s += ", ";
        s += expect_ident();
      }
      expect_op("]");
      s += ']';
    }
    if (eat_keyword("as")) {
      s += " as ";
      s += expect_ident();
    }
    return s;
  }

  Decl parse_decl() {
    if (at_keyword("abstract") || at_keyword("one") || at_keyword("sig")) return parse_sig();
    if (at_keyword("fun")) return parse_fun();
    if (at_keyword("pred")) return parse_pred_decl();
    if (at_keyword("fact")) return parse_fact();
    if (at_keyword("assert")) return parse_assert();
    if (at_keyword("check")) return parse_check();
    throw ParseError(peek().pos, "alloy: expected a declaration, got '" + peek().text + "'");
  }

  SigDecl parse_sig() {
    SigDecl s;
    while (true) {
      if (eat_keyword("abstract")) {
        s.abstract_ = true;
      } else if (eat_keyword("one")) {
        s.one_ = true;
      } else {
        break;
      }
    }
    expect_keyword("sig");
    s.names.push_back(expect_ident());
    while (eat_op(",")) s.names.push_back(expect_ident());
    if (eat_keyword("extends")) {
      s.extends = expect_ident();
    } else if (eat_keyword("in")) {
      s.extends = expect_ident();
      s.subset_ = true;
    }
    expect_op("{");
    while (!at_op("}")) {
      FieldDecl f;
      f.name = expect_ident();
      expect_op(":");
      f.type = parse_expr();
      s.fields.push_back(std::move(f));
      if (!at_op("}")) expect_op(",");
    }
    expect_op("}");
    return s;
  }

  std::vector<QuantDecl> parse_decl_list(const char* terminator) {
    std::vector<QuantDecl> decls;
    while (!at_op(terminator)) {
      QuantDecl d;
      d.names.push_back(expect_ident());
      while (at_op(",") && peek(1).kind == ATok::Ident && peek(2).kind == ATok::Op &&
             (peek(2).text == "," || peek(2).text == ":")) {
        advance();
        d.names.push_back(expect_ident());
      }
      expect_op(":");
      if (eat_keyword("set")) d.set_prefix = true;
      d.bound = parse_expr();
      decls.push_back(std::move(d));
      if (!at_op(terminator)) expect_op(",");
    }
    return decls;
  }

  FunDecl parse_fun() {
    FunDecl f;
    expect_keyword("fun");
    f.name = expect_ident();
    expect_op("[");
    f.params = parse_decl_list("]");
    expect_op("]");
    expect_op(":");
    if (eat_keyword("set")) f.result_set = true;
    f.result = parse_expr();
    expect_op("{");
    f.body = parse_expr();
    expect_op("}");
    return f;
  }

  PredDecl parse_pred_decl() {
    PredDecl p;
    expect_keyword("pred");
    p.name = expect_ident();
    if (eat_op("[")) {
      p.params = parse_decl_list("]");
      expect_op("]");
    }
    p.body = parse_block();
    return p;
  }

  FactDecl parse_fact() {
    FactDecl f;
    expect_keyword("fact");
    if (peek().kind == ATok::Ident) f.name = advance().text;
    f.body = parse_block();
    return f;
  }

  AssertDecl parse_assert() {
    AssertDecl a;
    expect_keyword("assert");
    a.name = expect_ident();
    a.body = parse_block();
    return a;
  }

  CheckCmd parse_check() {
    CheckCmd c;
    expect_keyword("check");
    c.assert_name = expect_ident();
    expect_keyword("for");
    bool saw_scope = false;
    while (true) {
      if (eat_keyword("exactly")) {
        if (peek().kind != ATok::Int) throw ParseError(peek().pos, "alloy: expected scope count");
        int count = static_cast<int>(advance().value);
        c.exact_bounds.emplace_back(expect_ident(), count);
      } else if (peek().kind == ATok::Int) {
        int count = static_cast<int>(advance().value);
        expect_keyword("int");
        c.bitwidth = count;
      } else if (!saw_scope) {
        throw ParseError(peek().pos, "alloy: expected scope item");
      } else {
        break;
      }
      saw_scope = true;
      if (!eat_op(",")) break;
    }
    return c;
  }

  std::vector<AlloyExprPtr> parse_block() {
    expect_op("{");
    std::vector<AlloyExprPtr> body;
    while (!at_op("}")) body.push_back(parse_formula());
    expect_op("}");
    return body;
  }

  // quantifier vs multiplicity-formula lookahead: `some a, b : ...`
  bool decl_follows() const {
    if (peek().kind != ATok::Ident) return false;
    std::size_t k = 1;
    while (peek(k).kind == ATok::Op && peek(k).text == "," && peek(k + 1).kind == ATok::Ident) k += 2;
    return peek(k).kind == ATok::Op && peek(k).text == ":";
  }

  AlloyExprPtr parse_formula() {
    if (at_keyword("let")) {
      advance();
      std::string var = expect_ident();
      expect_op("=");
      AlloyExprPtr value = parse_expr();
      std::vector<AlloyExprPtr> body = parse_quant_body();
      return a_let(std::move(var), std::move(value), std::move(body));
    }
    if ((at_keyword("all") || at_keyword("some") || at_keyword("no") || at_keyword("lone") ||
         at_keyword("one"))) {
      // `all` always binds; the rest only with a declaration ahead
      bool is_all = at_keyword("all");
      std::size_t saved = pos_;
      std::string kind = advance().text;
      if (is_all || decl_follows()) {
        std::vector<QuantDecl> decls;
        while (true) {
          QuantDecl d;
          d.names.push_back(expect_ident());
          while (at_op(",") && peek(1).kind == ATok::Ident && peek(2).kind == ATok::Op &&
                 (peek(2).text == "," || peek(2).text == ":")) {
            advance();
            d.names.push_back(expect_ident());
          }
          expect_op(":");
          d.bound = parse_expr();
          decls.push_back(std::move(d));
          if (!eat_op(",")) break;
        }
        std::vector<AlloyExprPtr> body = parse_quant_body();
        return a_quant(std::move(kind), std::move(decls), std::move(body));
      }
      pos_ = saved;
    }
    return parse_implies();
  }

  std::vector<AlloyExprPtr> parse_quant_body() {
    if (at_op("{")) return parse_block();
    expect_op("|");
    std::vector<AlloyExprPtr> body;
    body.push_back(parse_formula());
    return body;
  }

  AlloyExprPtr parse_implies() {
    AlloyExprPtr lhs = parse_or();
    if (eat_keyword("implies")) {
      AlloyExprPtr then_part = parse_implies();
      if (eat_keyword("else")) {
        AlloyExprPtr else_part = parse_implies();
        return a_cond(std::move(lhs), std::move(then_part), std::move(else_part));
      }
      return a_compare(AOp::Implies, std::move(lhs), std::move(then_part));
    }
    return lhs;
  }

  AlloyExprPtr parse_or() {
    AlloyExprPtr lhs = parse_and();
    while (at_keyword("or") || at_op("||")) {
      advance();
      lhs = a_compare(AOp::Or, std::move(lhs), parse_and());
    }
    return lhs;
  }

  AlloyExprPtr parse_and() {
    AlloyExprPtr lhs = parse_not();
    while (at_keyword("and") || at_op("&&")) {
      advance();
      lhs = a_compare(AOp::And, std::move(lhs), parse_not());
    }
    return lhs;
  }

  AlloyExprPtr parse_not() {
    if (at_op("!") || at_keyword("not")) {
      advance();
      return a_not(parse_not());
    }
    return parse_compare();
  }

  AlloyExprPtr parse_compare() {
    if ((at_keyword("some") || at_keyword("no") || at_keyword("lone") || at_keyword("one")) &&
        !decl_follows_after_kw()) {
      std::string kind = advance().text;
      return a_mult(std::move(kind), parse_expr());
    }
    AlloyExprPtr lhs = parse_expr();
    AOp op;
    if (eat_op("=")) {
      op = AOp::Eq;
    } else if (eat_keyword("in")) {
      op = AOp::In;
    } else if (eat_op("<=")) {
      op = AOp::Le;
    } else if (eat_op("<")) {
      op = AOp::Lt;
    } else if (eat_op(">=")) {
      op = AOp::Ge;
    } else if (eat_op(">")) {
      op = AOp::Gt;
    } else {
      return lhs;  // bare expression (e.g. a predicate call)
    }
    return a_compare(op, std::move(lhs), parse_expr());
  }

  bool decl_follows_after_kw() const {
    if (peek(1).kind != ATok::Ident) return false;
    std::size_t k = 2;
    while (peek(k).kind == ATok::Op && peek(k).text == "," && peek(k + 1).kind == ATok::Ident) k += 2;
    return peek(k).kind == ATok::Op && peek(k).text == ":";
  }

  AlloyExprPtr parse_expr() { return parse_plus(); }

  AlloyExprPtr parse_plus() {
    AlloyExprPtr lhs = parse_amp();
    while (at_op("+") || at_op("-")) {
      AOp op = peek().text == "+" ? AOp::Union : AOp::Diff;
      advance();
      lhs = a_binary(op, std::move(lhs), parse_amp());
    }
    return lhs;
  }

  AlloyExprPtr parse_amp() {
    AlloyExprPtr lhs = parse_arrow();
    while (at_op("&")) {
      advance();
      lhs = a_binary(AOp::Intersect, std::move(lhs), parse_arrow());
    }
    return lhs;
  }

  AlloyExprPtr parse_arrow() {
    AlloyExprPtr lhs = parse_domrestr();
    while (at_op("->")) {
      advance();
      lhs = a_binary(AOp::Product, std::move(lhs), parse_domrestr());
    }
    return lhs;
  }

  AlloyExprPtr parse_domrestr() {
    AlloyExprPtr lhs = parse_ranrestr();
    while (at_op("<:")) {
      advance();
      lhs = a_binary(AOp::DomRestr, std::move(lhs), parse_ranrestr());
    }
    return lhs;
  }

  AlloyExprPtr parse_ranrestr() {
    AlloyExprPtr lhs = parse_join();
    while (at_op(":>")) {
      advance();
      lhs = a_binary(AOp::RanRestr, std::move(lhs), parse_join());
    }
    return lhs;
  }

  AlloyExprPtr parse_join() {
    AlloyExprPtr lhs = parse_unary();
    while (at_op(".")) {
      advance();
      lhs = a_join(std::move(lhs), parse_unary());
    }
    return lhs;
  }

  AlloyExprPtr parse_unary() {
    if (at_op("~")) {
      advance();
      return a_transpose(parse_unary());
    }
    return parse_atom();
  }

  AlloyExprPtr parse_atom() {
    const AToken& t = peek();
    if (t.kind == ATok::Ident) {
      advance();
      if (at_op("[")) {
        advance();
        std::vector<AlloyExprPtr> args;
        while (!at_op("]")) {
          args.push_back(parse_expr());
          if (!at_op("]")) expect_op(",");
        }
        expect_op("]");
        return a_call(t.text, std::move(args));
      }
      return a_name(t.text);
    }
    if (t.kind == ATok::Int) {
      advance();
      return a_int(t.value);
    }
    if (eat_keyword("none")) return a_none();
    if (eat_keyword("univ")) return a_univ();
    if (eat_keyword("iden")) return a_iden();
    if (at_op("(")) {
      advance();
      AlloyExprPtr inner = parse_formula();
      expect_op(")");
      return inner;
    }
    if (at_op("{")) {
      advance();
      std::vector<QuantDecl> decls = parse_decl_list("|");
      expect_op("|");
      AlloyExprPtr body = parse_formula();
      expect_op("}");
      return a_compr(std::move(decls), std::move(body));
    }
    throw ParseError(t.pos, "alloy: expected an expression, got '" + t.text + "'");
  }
};

}  // namespace

AlloyModule parse_alloy_module(const std::string& text) { return AlloyParser(text).parse_module(); }

AlloyExprPtr parse_alloy_formula(const std::string& text) {
  return AlloyParser(text).parse_single_formula();
}

Decl parse_alloy_decl(const std::string& text) { return AlloyParser(text).parse_single_decl(); }

}  // namespace eb2alloy
