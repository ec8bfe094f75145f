#include "eb2alloy/lexer.hpp"

#include <array>
#include <cctype>
#include <unordered_set>

namespace eb2alloy {

namespace {

const std::unordered_set<std::string>& keywords() {
  static const std::unordered_set<std::string> kw = {
      "MACHINE", "CONTEXT", "SEES", "VARIABLES", "INVARIANTS", "INITIALISATION",
      "EVENT", "GUARDS", "ACTIONS", "END", "SETS", "ENUM", "CONSTANTS", "AXIOMS",
      "dom", "ran", "prj1", "prj2", "id", "mod", "not", "or", "forall", "exists", "INT",
  };
  return kw;
}

// Longest match first.
constexpr std::array<const char*, 9> kOps3 = {"<<|", "|>>", "|->", "<->", "-->", "+->", "->>", "+>>", ">->"};
constexpr std::array<const char*, 11> kOps2 = {"\\/", "/\\", "<|", "|>", "<:", "/:", "/=", "<=", ">=", ":=", "=>"};
constexpr const char* kOps1 = "\\:=<>+-*/^(){},.;&";

}  // namespace

bool is_ebm_keyword(const std::string& word) { return keywords().count(word) > 0; }

std::vector<Token> lex_ebm(const std::string& src) {
  std::vector<Token> out;
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
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      std::string word = src.substr(i, j - i);
      advance(j - i);
      out.push_back({is_ebm_keyword(word) ? TokKind::Keyword : TokKind::Ident, word, 0, pos});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      std::string digits = src.substr(i, j - i);
      advance(j - i);
      long long v = 0;
      try {
        v = std::stoll(digits);
      } catch (const std::out_of_range&) {
        throw ParseError(pos, "integer literal out of range: " + digits);
      }
      out.push_back({TokKind::Int, digits, v, pos});
      continue;
    }
    bool matched = false;
    for (const char* op : kOps3) {
      if (src.compare(i, 3, op) == 0) {
        out.push_back({TokKind::Op, op, 0, pos});
        advance(3);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    for (const char* op : kOps2) {
      if (src.compare(i, 2, op) == 0) {
        out.push_back({TokKind::Op, op, 0, pos});
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    for (const char* p = kOps1; *p; ++p) {
      if (c == *p) {
        out.push_back({TokKind::Op, std::string(1, c), 0, pos});
        advance(1);
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(pos, std::string("unexpected character '") + c + "'");
  }
  out.push_back({TokKind::End, "<eof>", 0, {line, col}});
  return out;
}

}  // namespace eb2alloy
