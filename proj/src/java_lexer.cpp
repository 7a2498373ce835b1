#include "smellsift/java_lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace smellsift {

namespace {

constexpr std::array<std::string_view, 53> kKeywords = {
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
    "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long", "native",
    "new", "package", "private", "protected", "public", "return", "short", "static", "strictfp",
    "super", "switch", "synchronized", "this", "throw", "throws", "transient", "try", "void",
    "volatile", "while", "true", "false", "null"};

// Longest first. '>' is deliberately absent from the shift forms.
constexpr std::array<std::string_view, 21> kMultiCharPunct = {
    "<<=", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", ">=", "+=", "-=",
    "*=", "/=", "&=", "|=", "^=", "%=", "<<"};

bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80; }
bool is_ident_part(unsigned char c) { return is_ident_start(c) || std::isdigit(c); }

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (skip_trivia()) {
      const std::size_t start = pos_;
      const std::size_t start_line = line_;
      const unsigned char c = src_[pos_];
      TokenKind kind = TokenKind::Punct;
      if (is_ident_start(c)) {
        while (pos_ < src_.size() && is_ident_part(src_[pos_])) ++pos_;
        kind = is_java_keyword(src_.substr(start, pos_ - start)) ? TokenKind::Keyword : TokenKind::Identifier;
      } else if (std::isdigit(c) || (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        lex_number();
        kind = TokenKind::Number;
      } else if (src_.compare(pos_, 3, "\"\"\"") == 0) {
        lex_text_block();
        kind = TokenKind::String;
      } else if (c == '"' || c == '\'') {
        lex_quoted(static_cast<char>(c));
        kind = c == '"' ? TokenKind::String : TokenKind::Char;
      } else {
        lex_punct();
      }
      out.push_back(Token{kind, std::string(src_.substr(start, pos_ - start)), start_line, line_});
    }
    return out;
  }

private:
  // Returns false at end of input.
  bool skip_trivia() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (src_.compare(pos_, 2, "//") == 0) {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (src_.compare(pos_, 2, "/*") == 0) {
        pos_ += 2;
        while (pos_ < src_.size() && src_.compare(pos_, 2, "*/") != 0) {
          if (src_[pos_] == '\n') ++line_;
          ++pos_;
        }
        pos_ = std::min(pos_ + 2, src_.size());
      } else {
        return true;
      }
    }
    return false;
  }

  void lex_number() {
    auto at = [&](std::size_t i) -> unsigned char { return i < src_.size() ? src_[i] : '\0'; };
    if (at(pos_) == '0' && (at(pos_ + 1) == 'x' || at(pos_ + 1) == 'X' || at(pos_ + 1) == 'b' || at(pos_ + 1) == 'B')) {
      pos_ += 2;
      while (std::isxdigit(at(pos_)) || at(pos_) == '_') ++pos_;
    } else {
      while (std::isdigit(at(pos_)) || at(pos_) == '_') ++pos_;
      if (at(pos_) == '.' && std::isdigit(at(pos_ + 1))) {
        ++pos_;
        while (std::isdigit(at(pos_)) || at(pos_) == '_') ++pos_;
      } else if (at(pos_) == '.' && !is_ident_start(at(pos_ + 1))) {
        ++pos_; // "1." is a valid double literal
      }
      if (at(pos_) == 'e' || at(pos_) == 'E') {
        std::size_t p = pos_ + 1;
        if (at(p) == '+' || at(p) == '-') ++p;
        if (std::isdigit(at(p))) {
          pos_ = p;
          while (std::isdigit(at(pos_))) ++pos_;
        }
      }
    }
    const unsigned char suffix = at(pos_);
    if (suffix == 'l' || suffix == 'L' || suffix == 'f' || suffix == 'F' || suffix == 'd' || suffix == 'D') ++pos_;
  }

  void lex_quoted(char quote) {
    ++pos_;
    while (pos_ < src_.size() && src_[pos_] != quote && src_[pos_] != '\n') {
      if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) ++pos_;
      ++pos_;
    }
    if (pos_ < src_.size() && src_[pos_] == quote) ++pos_;
  }

  void lex_text_block() {
    pos_ += 3;
    while (pos_ < src_.size() && src_.compare(pos_, 3, "\"\"\"") != 0) {
      if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) {
        if (src_[pos_ + 1] == '\n') ++line_;
        pos_ += 2;
        continue;
      }
      if (src_[pos_] == '\n') ++line_;
      ++pos_;
    }
    pos_ = std::min(pos_ + 3, src_.size());
  }

  void lex_punct() {
    for (std::string_view op : kMultiCharPunct) {
      if (src_.compare(pos_, op.size(), op) == 0) {
        pos_ += op.size();
        return;
      }
    }
    ++pos_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

} // namespace

bool is_java_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::vector<Token> tokenize_java(std::string_view source) { return Lexer(source).run(); }

std::string join_tokens(const std::vector<Token>& tokens, std::size_t first, std::size_t last) {
  std::string out;
  for (std::size_t i = first; i < last && i < tokens.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += tokens[i].text;
  }
  return out;
}

} // namespace smellsift
