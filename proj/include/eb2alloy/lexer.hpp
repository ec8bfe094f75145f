#pragma once

#include <string>
#include <vector>

#include "eb2alloy/ast.hpp"

namespace eb2alloy {

enum class TokKind { Ident, Int, Keyword, Op, End };

struct Token {
  TokKind kind;
  std::string text;
  long long value = 0;
  SourcePos pos;
};

// Tokenizes .ebm source. `//` comments run to end of line.
std::vector<Token> lex_ebm(const std::string& src);

bool is_ebm_keyword(const std::string& word);

}  // namespace eb2alloy
