#pragma once

#include <optional>
#include <string>

#include "ppg/constructions.hpp"
#include "ppg/errors.hpp"
#include "ppg/moebius.hpp"
#include "ppg/numbers.hpp"
#include "ppg/piecewise.hpp"
#include "ppg/quadratic.hpp"

namespace ppg {

/// Syntax error carrying the 1-based line and column where parsing stopped.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int col);
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

// Each parser consumes the whole input (modulo whitespace) or throws.
Rational parse_rational(const std::string& text);
RealQuadratic parse_quadratic(const std::string& text);
SL2Matrix parse_matrix(const std::string& text);

/// "[u,v]" with finite endpoints in the quadratic grammar; closed interval.
IntervalSpec parse_interval(const std::string& text);

/// Element grammar: piece (";" piece)*, piece = "(lo,hi):[[a,b],[c,d]]",
/// endpoints "-inf" / "+inf" / numbers. Validation is delegated to pp_make.
PPMap parse_element(const std::string& text);

/// A stored element: optional "# name:" and "# ring:" directive lines,
/// other comment lines ignored, remaining lines form the element text.
struct ElementDocument {
  std::string name;              // empty when absent
  std::optional<PrimeSet> ring;  // declared coefficient ring, if any
  PPMap element;
};

ElementDocument parse_document(const std::string& text);

std::string format_element(const PPMap& f);
std::string format_document(const ElementDocument& doc);

}  // namespace ppg
