#include "ppg/text.hpp"

#include <cctype>
#include <cstring>
#include <utility>
#include <vector>

namespace ppg {

ParseError::ParseError(const std::string& what, int line, int col)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(col) +
            ": " + what),
      line_(line),
      col_(col) {}

namespace {

struct Cursor {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;

  bool done() const { return pos >= text.size(); }
  char peek() const { return done() ? '\0' : text[pos]; }

  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws() {
    while (!done() && std::isspace(static_cast<unsigned char>(text[pos])))
      advance();
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line, col);
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  bool try_consume(char c) {
    skip_ws();
    if (peek() != c) return false;
    advance();
    return true;
  }

  /// Matches a literal token after whitespace, consuming it on success.
  bool try_token(const char* token) {
    skip_ws();
    std::size_t n = std::strlen(token);
    if (text.compare(pos, n, token) != 0) return false;
    for (std::size_t i = 0; i < n; ++i) advance();
    return true;
  }

  /// Lookahead for a literal token after whitespace, consuming nothing.
  bool ahead(const char* token) {
    skip_ws();
    return text.compare(pos, std::strlen(token), token) == 0;
  }
};

Integer read_integer(Cursor& cur) {
  cur.skip_ws();
  std::string digits;
  if (cur.peek() == '-' || cur.peek() == '+') {
    if (cur.peek() == '-') digits += '-';
    cur.advance();
    cur.skip_ws();
  }
  if (!std::isdigit(static_cast<unsigned char>(cur.peek())))
    cur.fail("expected a digit");
  while (std::isdigit(static_cast<unsigned char>(cur.peek()))) {
    digits += cur.peek();
    cur.advance();
  }
  return Integer(digits);
}

Rational read_rational(Cursor& cur) {
  int line = cur.line, col = cur.col;
  Integer num = read_integer(cur);
  if (!cur.try_consume('/')) return Rational(num);
  cur.skip_ws();
  line = cur.line;
  col = cur.col;
  Integer den = read_integer(cur);
  if (den == 0) throw ParseError("denominator must be nonzero", line, col);
  return make_rational(num, den);
}

/// "sqrt" has been consumed; reads "(d)" with d a positive integer.
Integer read_radicand(Cursor& cur) {
  cur.expect('(');
  cur.skip_ws();
  int line = cur.line, col = cur.col;
  Integer d = read_integer(cur);
  if (d < 1) throw ParseError("radicand must be a positive integer", line, col);
  cur.expect(')');
  return d;
}

RealQuadratic read_number(Cursor& cur) {
  cur.skip_ws();
  // Root-first forms: sqrt(d), -sqrt(d), +sqrt(d).
  if (cur.ahead("sqrt")) {
    cur.try_token("sqrt");
    return RealQuadratic(0, 1, read_radicand(cur));
  }
  if (cur.peek() == '-' || cur.peek() == '+') {
    std::size_t pos = cur.pos;
    int line = cur.line, col = cur.col;
    int sign = cur.peek() == '-' ? -1 : 1;
    cur.advance();
    if (cur.ahead("sqrt")) {
      cur.try_token("sqrt");
      return RealQuadratic(0, sign, read_radicand(cur));
    }
    cur.pos = pos;
    cur.line = line;
    cur.col = col;
  }
  Rational first = read_rational(cur);
  if (cur.try_consume('*')) {
    if (!cur.try_token("sqrt")) cur.fail("expected 'sqrt'");
    return RealQuadratic(0, first, read_radicand(cur));
  }
  cur.skip_ws();
  if (cur.peek() == '+' || cur.peek() == '-') {
    int sign = cur.peek() == '-' ? -1 : 1;
    cur.advance();
    if (cur.try_token("sqrt"))
      return RealQuadratic(first, sign, read_radicand(cur));
    Rational coeff = read_rational(cur);
    if (!cur.try_consume('*')) cur.fail("expected '*'");
    if (!cur.try_token("sqrt")) cur.fail("expected 'sqrt'");
    return RealQuadratic(first, sign * coeff, read_radicand(cur));
  }
  return RealQuadratic(first);
}

SL2Matrix read_matrix(Cursor& cur) {
  cur.skip_ws();
  int line = cur.line, col = cur.col;
  cur.expect('[');
  cur.expect('[');
  Rational a = read_rational(cur);
  cur.expect(',');
  Rational b = read_rational(cur);
  cur.expect(']');
  cur.expect(',');
  cur.expect('[');
  Rational c = read_rational(cur);
  cur.expect(',');
  Rational d = read_rational(cur);
  cur.expect(']');
  cur.expect(']');
  try {
    return SL2Matrix(a, b, c, d);
  } catch (const DomainError& e) {
    throw ParseError(e.what(), line, col);
  }
}

ExtendedReal read_endpoint(Cursor& cur) {
  if (cur.try_token("-inf")) return ExtendedReal::neg_inf();
  if (cur.try_token("+inf")) return ExtendedReal::pos_inf();
  return ExtendedReal(read_number(cur));
}

Piece read_piece(Cursor& cur) {
  cur.expect('(');
  ExtendedReal lo = read_endpoint(cur);
  cur.expect(',');
  ExtendedReal hi = read_endpoint(cur);
  cur.expect(')');
  cur.expect(':');
  SL2Matrix M = read_matrix(cur);
  return Piece{std::move(lo), std::move(hi), std::move(M)};
}

void require_end(Cursor& cur) {
  cur.skip_ws();
  if (!cur.done()) cur.fail("unexpected trailing characters");
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Rational parse_rational(const std::string& text) {
  Cursor cur{text};
  Rational out = read_rational(cur);
  require_end(cur);
  return out;
}

RealQuadratic parse_quadratic(const std::string& text) {
  Cursor cur{text};
  RealQuadratic out = read_number(cur);
  require_end(cur);
  return out;
}

SL2Matrix parse_matrix(const std::string& text) {
  Cursor cur{text};
  SL2Matrix out = read_matrix(cur);
  require_end(cur);
  return out;
}

IntervalSpec parse_interval(const std::string& text) {
  Cursor cur{text};
  cur.expect('[');
  cur.skip_ws();
  int line = cur.line, col = cur.col;
  ExtendedReal lo = read_endpoint(cur);
  cur.expect(',');
  cur.skip_ws();
  ExtendedReal hi = read_endpoint(cur);
  cur.expect(']');
  require_end(cur);
  if (!lo.is_finite() || !hi.is_finite())
    throw ParseError("interval endpoints must be finite", line, col);
  if (compare(lo, hi) != Ordering::less)
    throw ParseError("interval endpoints must be increasing", line, col);
  return IntervalSpec::closed(lo.finite(), hi.finite());
}

PPMap parse_element(const std::string& text) {
  Cursor cur{text};
  std::vector<Piece> pieces;
  pieces.push_back(read_piece(cur));
  while (cur.try_consume(';')) pieces.push_back(read_piece(cur));
  require_end(cur);
  return pp_make(std::move(pieces));
}

ElementDocument parse_document(const std::string& text) {
  // Directive lines are blanked rather than removed so that errors in the
  // element text keep their original line numbers.
  std::string body;
  body.reserve(text.size());
  ElementDocument doc;
  std::size_t start = 0;
  int line_no = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string lineText = text.substr(
        start, nl == std::string::npos ? std::string::npos : nl - start);
    ++line_no;
    std::string stripped = trim(lineText);
    if (!stripped.empty() && stripped[0] == '#') {
      std::string rest = trim(stripped.substr(1));
      if (rest.rfind("name:", 0) == 0) {
        doc.name = trim(rest.substr(5));
      } else if (rest.rfind("ring:", 0) == 0) {
        try {
          doc.ring = PrimeSet::parse(trim(rest.substr(5)));
        } catch (const Error& e) {
          throw ParseError(e.what(), line_no, 1);
        }
      }
      // Other comment lines are dropped.
    } else {
      body += lineText;
    }
    if (nl == std::string::npos) break;
    body += '\n';
    start = nl + 1;
  }
  if (trim(body).empty()) throw ParseError("document has no element", 1, 1);
  doc.element = parse_element(body);
  return doc;
}

std::string format_element(const PPMap& f) { return to_string(f); }

std::string format_document(const ElementDocument& doc) {
  std::string out;
  if (!doc.name.empty()) out += "# name: " + doc.name + "\n";
  if (doc.ring) out += "# ring: " + doc.ring->str() + "\n";
  out += format_element(doc.element) + "\n";
  return out;
}

}  // namespace ppg
