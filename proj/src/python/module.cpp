#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "ppg/constructions.hpp"
#include "ppg/errors.hpp"
#include "ppg/piecewise.hpp"
#include "ppg/text.hpp"

namespace py = pybind11;

namespace {

// String-level bindings: elements travel as canonical grammar text, so the
// Python side needs no wrapper classes and values stay exact.

ppg::PPMap get(const std::string& text) { return ppg::parse_element(text); }

std::string put(const ppg::PPMap& f) { return ppg::format_element(f); }

std::string normalize(const std::string& f) { return put(get(f)); }

std::string compose(const std::string& f, const std::string& g) {
  return put(ppg::pp_compose(get(f), get(g)));
}

std::string invert(const std::string& f) { return put(ppg::pp_invert(get(f))); }

std::string commutator(const std::string& f, const std::string& g) {
  return put(ppg::pp_commutator(get(f), get(g)));
}

std::string eval_at(const std::string& f, const std::string& x) {
  return ppg::to_string(ppg::pp_eval(get(f), ppg::parse_quadratic(x)));
}

std::string support(const std::string& f) {
  ppg::SupportInterval s = ppg::pp_support(get(f));
  if (s.empty) return "empty";
  if (!s.compact) return "noncompact";
  return "[" + ppg::to_string(s.lo) + "," + ppg::to_string(s.hi) + "]";
}

bool member(const std::string& f, const std::string& primes) {
  return ppg::pp_in_subgroup(get(f), ppg::PrimeSet::parse(primes));
}

std::string lemma_extend(const std::string& matrix, const std::string& interval,
                         const std::string& primes) {
  auto [h, cert] = ppg::lemma_element(ppg::parse_matrix(matrix),
                                      ppg::parse_interval(interval),
                                      ppg::PrimeSet::parse(primes));
  cert.validate();
  return put(h);
}

long escape_exponent(const std::string& f, long p, const std::string& primes) {
  return ppg::escape_exponent(get(f), ppg::Integer(p),
                              ppg::PrimeSet::parse(primes));
}

}  // namespace

PYBIND11_MODULE(ppgroup, m) {
  m.doc() = "exact piecewise-projective homeomorphisms of the line";
  py::register_exception<ppg::Error>(m, "PpgError");
  m.def("normalize", &normalize, py::arg("element"),
        "parse and reprint an element in canonical form");
  m.def("compose", &compose, py::arg("f"), py::arg("g"),
        "composition f after g, canonical text");
  m.def("invert", &invert, py::arg("f"));
  m.def("commutator", &commutator, py::arg("f"), py::arg("g"));
  m.def("eval", &eval_at, py::arg("f"), py::arg("x"),
        "exact value at a rational or quadratic point");
  m.def("support", &support, py::arg("f"));
  m.def("member", &member, py::arg("f"), py::arg("primes"),
        "membership in the subgroup over Z[1/primes]");
  m.def("lemma_extend", &lemma_extend, py::arg("matrix"), py::arg("interval"),
        py::arg("primes"),
        "compactly supported commutator agreeing with the matrix on the interval");
  m.def("escape_exponent", &escape_exponent, py::arg("f"), py::arg("p"),
        py::arg("primes"));
}
