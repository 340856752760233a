#include "wave3/parse.hpp"

#include <cctype>
#include <optional>
#include <vector>

#include "wave3/errors.hpp"

namespace wave3 {

namespace {

enum class Tok { number, ident, tick, plus, minus, star, slash, caret, lparen, rparen, comma, end };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_ws();
      Token t = next();
      out.push_back(t);
      if (t.kind == Tok::end) break;
    }
    return out;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance();
  }

  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  Token next() {
    if (pos_ >= s_.size()) return {Tok::end, "", line_, col_};
    int l = line_, c = col_;
    char ch = s_[pos_];
    auto single = [&](Tok k) {
      advance();
      return Token{k, std::string(1, ch), l, c};
    };
    switch (ch) {
      case '+': return single(Tok::plus);
      case '-': return single(Tok::minus);
      case '*': return single(Tok::star);
      case '/': return single(Tok::slash);
      case '^': return single(Tok::caret);
      case '(': return single(Tok::lparen);
      case ')': return single(Tok::rparen);
      case ',': return single(Tok::comma);
      case '\'': return single(Tok::tick);
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::string text;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        text += s_[pos_];
        advance();
      }
      return {Tok::number, text, l, c};
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::string text;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        text += s_[pos_];
        advance();
      }
      return {Tok::ident, text, l, c};
    }
    fail(Errc::syntax_error, "unexpected character '" + std::string(1, ch) + "' at " +
                                 std::to_string(l) + ":" + std::to_string(c));
  }

  const std::string& s_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  RatExpr run() {
    RatExpr e = expr();
    expect(Tok::end, "end of input");
    return e;
  }

 private:
  const Token& peek(size_t ahead = 0) const {
    size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }

  Token take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] void error(const Token& t, const std::string& what) {
    fail(Errc::syntax_error, what + " at " + std::to_string(t.line) + ":" + std::to_string(t.col));
  }

  void expect(Tok k, const std::string& what) {
    if (peek().kind != k) error(peek(), "expected " + what);
    take();
  }

  RatExpr expr() {
    RatExpr e = term();
    while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
      bool add = take().kind == Tok::plus;
      RatExpr rhs = term();
      e = add ? e + rhs : e - rhs;
    }
    return e;
  }

  RatExpr term() {
    RatExpr e = factor();
    while (peek().kind == Tok::star || peek().kind == Tok::slash) {
      Token op = take();
      RatExpr rhs = factor();
      if (op.kind == Tok::star)
        e = e * rhs;
      else
        e = e / rhs;
    }
    return e;
  }

  RatExpr factor() {
    RatExpr b = base();
    if (peek().kind == Tok::caret) {
      take();
      bool neg = false;
      if (peek().kind == Tok::minus) {
        neg = true;
        take();
      }
      if (peek().kind != Tok::number) error(peek(), "expected integer exponent");
      Token n = take();
      long e = std::stol(n.text);
      return b.pow(neg ? -e : e);
    }
    return b;
  }

  // rational := int ('/' uint)?  -- consumed greedily at the base level
  RatExpr number(bool negative) {
    Token n = take();
    Integer num(n.text);
    if (negative) num = -num;
    if (peek().kind == Tok::slash && peek(1).kind == Tok::number) {
      take();
      Token d = take();
      Integer den(d.text);
      if (den == 0) error(d, "zero denominator in rational");
      return RatExpr(Rational(num, den));
    }
    return RatExpr(Rational(num));
  }

  RatExpr base() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::minus:
        if (peek(1).kind == Tok::number) {
          take();
          return number(true);
        }
        error(t, "unexpected '-'");
      case Tok::number: return number(false);
      case Tok::lparen: {
        take();
        RatExpr e = expr();
        expect(Tok::rparen, "')'");
        return e;
      }
      case Tok::ident: return identifier();
      default: error(t, "unexpected token '" + t.text + "'");
    }
  }

  RatExpr identifier() {
    Token t = take();
    if (t.text == "d" && peek().kind == Tok::lparen) {
      take();
      if (peek().kind != Tok::ident) error(peek(), "expected field name in d(,)");
      Token f = take();
      auto field = field_from_name(f.text);
      if (!field)
        fail(Errc::unknown_identifier, "'" + f.text + "' is not a field at " +
                                           std::to_string(f.line) + ":" + std::to_string(f.col));
      expect(Tok::comma, "','");
      if (peek().kind != Tok::number) error(peek(), "expected derivative order");
      Token n = take();
      long order = std::stol(n.text);
      if (order > JetLimits::max_order())
        fail(Errc::jet_order_overflow, "order " + n.text + " beyond limit");
      expect(Tok::rparen, "')'");
      return RatExpr::var(JetVar{*field, static_cast<uint16_t>(order)});
    }
    auto field = field_from_name(t.text);
    if (field) {
      int order = 0;
      while (peek().kind == Tok::tick) {
        take();
        ++order;
      }
      if (order > JetLimits::max_order())
        fail(Errc::jet_order_overflow, "order beyond limit");
      return RatExpr::var(JetVar{*field, static_cast<uint16_t>(order)});
    }
    if (peek().kind == Tok::tick) error(peek(), "derivative tick after non-field identifier");
    return RatExpr::param(t.text);
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

}  // namespace

RatExpr parse_expr(const std::string& text) {
  Lexer lex(text);
  Parser parser(lex.run());
  return parser.run();
}

std::string format_expr(const RatExpr& e) { return e.str(); }

}  // namespace wave3
