#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace smellsift {

enum class TokenKind {
  Identifier,
  Keyword,
  Number,
  String, ///< includes text blocks
  Char,
  Punct,
};

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t line;     ///< 1-based line of the first character
  std::size_t end_line; ///< differs from line only for text blocks

  bool is(std::string_view s) const { return (kind == TokenKind::Punct || kind == TokenKind::Keyword) && text == s; }
  bool is_identifier() const { return kind == TokenKind::Identifier; }

  friend bool operator==(const Token&, const Token&) = default;
};

/// Splits Java source into tokens. Comments and whitespace are dropped, so
/// keywords inside comments or string literals never surface as tokens.
/// `>` is never merged into shift operators; generic closers stay separate.
std::vector<Token> tokenize_java(std::string_view source);

bool is_java_keyword(std::string_view word);

/// Space-joined token texts; tokenizing the result reproduces the same
/// kinds and texts.
std::string join_tokens(const std::vector<Token>& tokens, std::size_t first, std::size_t last);

} // namespace smellsift
