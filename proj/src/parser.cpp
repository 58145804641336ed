// Recursive-descent parser for the polynomial expression grammar:
//
//   expr    := term (('+'|'-') term)*
//   term    := unary ('*' unary)*
//   unary   := ('+'|'-') unary | factor
//   factor  := base ('^' int)?
//   base    := 'z' | 'w' | 'i' | float | float 'i' | '(' expr ')'
//
// Exponents may be written bare (z^-2) or grouped (z^{-2}, z^(-2)).
// Juxtaposition such as "2z" is rejected.

#include <cctype>
#include <charconv>
#include <cstdlib>

#include "hullforge/error.hpp"
#include "hullforge/laurent.hpp"

namespace hullforge {
namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  LaurentPoly2 run() {
    skip_ws();
    if (at_end()) throw ParseError("empty expression", pos_);
    LaurentPoly2 result = expr();
    skip_ws();
    if (!at_end()) {
      if (starts_base(peek())) throw ParseError("implicit multiplication is not allowed", pos_);
      throw ParseError(std::string("unexpected character '") + peek() + "'", pos_);
    }
    return result;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  static bool starts_base(char c) {
    return c == 'z' || c == 'w' || c == 'i' || c == '(' || c == '.' ||
           std::isdigit(static_cast<unsigned char>(c));
  }

  LaurentPoly2 expr() {
    LaurentPoly2 acc = term();
    for (;;) {
      if (accept('+')) {
        acc = acc + term();
      } else if (accept('-')) {
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }

  LaurentPoly2 term() {
    LaurentPoly2 acc = unary();
    for (;;) {
      skip_ws();
      if (accept('*')) {
        acc = acc * unary();
      } else if (starts_base(peek())) {
        throw ParseError("implicit multiplication is not allowed", pos_);
      } else {
        return acc;
      }
    }
  }

  LaurentPoly2 unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return factor();
  }

  LaurentPoly2 factor() {
    const std::size_t base_pos = pos_;
    LaurentPoly2 b = base();
    if (!accept('^')) return b;
    const std::size_t exp_pos = pos_;
    const int n = integer_exponent();
    try {
      return b.pow(n);
    } catch (const DomainError& e) {
      throw ParseError(e.what(), n < 0 ? base_pos : exp_pos);
    }
  }

  int integer_exponent() {
    skip_ws();
    char close = '\0';
    if (peek() == '{') close = '}';
    if (peek() == '(') close = ')';
    if (close != '\0') ++pos_;
    skip_ws();
    bool negative = false;
    if (peek() == '-' || peek() == '+') {
      negative = peek() == '-';
      ++pos_;
    }
    skip_ws();
    const std::size_t start = pos_;
    long long value = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      value = value * 10 + (peek() - '0');
      if (value > kMaxExponent) throw ParseError("exponent overflow", start);
      ++pos_;
    }
    if (pos_ == start) throw ParseError("expected integer exponent", pos_);
    if (close != '\0') expect(close);
    return static_cast<int>(negative ? -value : value);
  }

  LaurentPoly2 base() {
    skip_ws();
    const char c = peek();
    if (c == 'z') {
      ++pos_;
      return LaurentPoly2::z();
    }
    if (c == 'w') {
      ++pos_;
      return LaurentPoly2::w();
    }
    if (c == 'i') {
      ++pos_;
      return LaurentPoly2(Complex(0.0, 1.0));
    }
    if (c == '(') {
      ++pos_;
      LaurentPoly2 inner = expr();
      expect(')');
      return inner;
    }
    if (c == '.' || std::isdigit(static_cast<unsigned char>(c))) return number();
    if (at_end()) throw ParseError("unexpected end of expression", pos_);
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  LaurentPoly2 number() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) ++pos_;
    if (peek() == 'e' || peek() == 'E') {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      }
    }
    double value = 0.0;
    const auto* first = text_.data() + start;
    const auto* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) throw ParseError("malformed number", start);
    if (peek() == 'i') {
      ++pos_;
      return LaurentPoly2(Complex(0.0, value));
    }
    return LaurentPoly2(value);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

LaurentPoly2 parse(std::string_view expr) {
  try {
    return Parser(expr).run();
  } catch (const ParseError&) {
    throw;
  } catch (const DomainError& e) {
    // exponent overflow while multiplying out
    throw ParseError(e.what(), 0);
  }
}

}  // namespace hullforge
