#include "ppg/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "ppg/constructions.hpp"
#include "ppg/errors.hpp"
#include "ppg/report.hpp"
#include "ppg/text.hpp"
#include "ppg/verify.hpp"

namespace ppg {

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInvalidInput = 2;
constexpr int kFailedCheck = 3;

using Clock = std::chrono::steady_clock;

std::string slurp(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw DomainError("cannot open " + path);
  std::ostringstream buf;
  buf << file.rdbuf();
  return buf.str();
}

struct LoadedElement {
  ElementDocument doc;
  std::string path;
  std::string hash;
};

LoadedElement load_element(const std::string& path) {
  std::string text = slurp(path);
  return LoadedElement{parse_document(text), path, hex64(fnv1a64(text))};
}

void add_input(ReportWriter& rep, const std::string& key,
               const LoadedElement& in) {
  rep.add(key, in.path);
  rep.add(key + "_hash", in.hash);
  if (!in.doc.name.empty()) rep.add(key + "_name", in.doc.name);
}

void write_element(const std::string& path, const PPMap& f) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open " + path + " for writing");
  ElementDocument doc;
  doc.element = f;
  file << format_document(doc);
  if (!file) throw Error("write to " + path + " failed");
}

struct Emitter {
  std::ostream& out;
  std::string out_path;
  Clock::time_point start = Clock::now();

  void finish(ReportWriter& rep) const {
    rep.add("wall_time_ms",
            static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                  Clock::now() - start)
                                  .count()));
    out << rep.str();
    if (!out_path.empty()) rep.write(out_path);
  }
};

std::string support_line(const SupportInterval& s) {
  if (s.empty) return "empty";
  if (!s.compact) return "noncompact";
  return "[" + to_string(s.lo) + "," + to_string(s.hi) + "]";
}

int emit_element_result(const char* command, const LoadedElement* a,
                        const LoadedElement* b, const PPMap& result,
                        const std::string& element_out, Emitter& em) {
  ReportWriter rep;
  rep.add("command", command);
  if (a) add_input(rep, "input_1", *a);
  if (b) add_input(rep, "input_2", *b);
  std::string text = format_element(result);
  rep.add("element", text);
  rep.add("element_hash", hex64(fnv1a64(text)));
  rep.add("pieces", static_cast<long>(result.pieces().size()));
  if (!element_out.empty()) write_element(element_out, result);
  em.finish(rep);
  return kOk;
}

std::vector<std::string> ppg_files_in(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw DomainError(dir + " is not a directory");
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ppg")
      paths.push_back(entry.path().string());
  }
  std::sort(paths.begin(), paths.end());
  return paths;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"exact piecewise-projective group calculator"};
  app.require_subcommand(1);
  // Let subcommands hand --out/--element-out back up to the app.
  app.fallthrough();

  std::string out_path, element_out;
  app.add_option("--out", out_path, "also write the report to this file")
      ->capture_default_str();
  app.add_option("--element-out", element_out,
                 "write the resulting element to this file");

  std::string file_a, file_b, point_text, matrix_text, interval_text;
  std::string primes_T, primes_S, set_dir;
  Integer prime_p = 0;
  std::optional<Integer> pinned_p;
  long seed = 0;

  CLI::App* cmd_parse = app.add_subcommand("parse", "validate and normalize an element file");
  cmd_parse->add_option("file", file_a, "element file")->required();

  CLI::App* cmd_format = app.add_subcommand("format", "print the canonical form of an element file");
  cmd_format->add_option("file", file_a, "element file")->required();

  CLI::App* cmd_compose = app.add_subcommand("compose", "compose two elements (left after right)");
  cmd_compose->add_option("left", file_a, "outer element")->required();
  cmd_compose->add_option("right", file_b, "inner element")->required();

  CLI::App* cmd_invert = app.add_subcommand("invert", "invert an element");
  cmd_invert->add_option("file", file_a, "element file")->required();

  CLI::App* cmd_comm = app.add_subcommand("commutator", "commutator [f, g] = f g f^-1 g^-1");
  cmd_comm->add_option("f", file_a, "first element")->required();
  cmd_comm->add_option("g", file_b, "second element")->required();

  CLI::App* cmd_eval = app.add_subcommand("eval", "apply an element to a point");
  cmd_eval->add_option("file", file_a, "element file")->required();
  cmd_eval->add_option("point", point_text, "rational or quadratic point")->required();

  CLI::App* cmd_support = app.add_subcommand("support", "support interval of an element");
  cmd_support->add_option("file", file_a, "element file")->required();

  CLI::App* cmd_member = app.add_subcommand("member", "test membership in the T-subgroup");
  cmd_member->add_option("file", file_a, "element file")->required();
  cmd_member->add_option("--T", primes_T, "comma-separated primes")->required();

  CLI::App* cmd_lemma = app.add_subcommand(
      "lemma-extend", "extend a matrix on an interval to a compactly supported commutator");
  cmd_lemma->add_option("--matrix", matrix_text, "SL2 matrix [[a,b],[c,d]]")->required();
  cmd_lemma->add_option("--interval", interval_text, "compact interval [u,v]")->required();
  cmd_lemma->add_option("--T", primes_T, "comma-separated primes")->required();

  CLI::App* cmd_witness = app.add_subcommand("witness", "produce verifiable witnesses");
  cmd_witness->require_subcommand(1);
  CLI::App* cmd_wc = cmd_witness->add_subcommand(
      "commensurate", "conjugation witness separating the S- and T-subgroups");
  cmd_wc->add_option("--g", file_a, "element of the S-subgroup")->required();
  cmd_wc->add_option("--S", primes_S, "comma-separated primes")->required();
  cmd_wc->add_option("--T", primes_T, "comma-separated primes")->required();
  cmd_wc->add_option("--p", pinned_p, "pin the witnessing prime");
  CLI::App* cmd_wu = cmd_witness->add_subcommand(
      "unconfine", "escape exponent with per-step evidence");
  cmd_wu->add_option("--element", file_a, "element file")->required();
  cmd_wu->add_option("--p", prime_p, "conjugating prime")->required();
  cmd_wu->add_option("--T", primes_T, "comma-separated primes")->required();

  CLI::App* cmd_escape = app.add_subcommand(
      "escape", "common escape exponent for a directory of elements");
  cmd_escape->add_option("--set", set_dir, "directory of .ppg files")->required();
  cmd_escape->add_option("--p", prime_p, "conjugating prime")->required();
  cmd_escape->add_option("--T", primes_T, "comma-separated primes")->required();

  CLI::App* cmd_verify = app.add_subcommand("verify", "run verification suites");
  cmd_verify->require_subcommand(1);
  CLI::App* cmd_suite = cmd_verify->add_subcommand("suite", "acceptance property suite");
  cmd_suite->add_option("--seed", seed, "random seed")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << e.what() << "\n";
    return kUsage;
  }

  Emitter em{out, out_path};
  try {
    if (*cmd_parse || *cmd_format) {
      LoadedElement in = load_element(file_a);
      return emit_element_result(*cmd_parse ? "parse" : "format", &in, nullptr,
                                 in.doc.element, element_out, em);
    }
    if (*cmd_compose) {
      LoadedElement lhs = load_element(file_a), rhs = load_element(file_b);
      return emit_element_result("compose", &lhs, &rhs,
                                 pp_compose(lhs.doc.element, rhs.doc.element),
                                 element_out, em);
    }
    if (*cmd_invert) {
      LoadedElement in = load_element(file_a);
      return emit_element_result("invert", &in, nullptr,
                                 pp_invert(in.doc.element), element_out, em);
    }
    if (*cmd_comm) {
      LoadedElement lhs = load_element(file_a), rhs = load_element(file_b);
      return emit_element_result("commutator", &lhs, &rhs,
                                 pp_commutator(lhs.doc.element, rhs.doc.element),
                                 element_out, em);
    }
    if (*cmd_eval) {
      LoadedElement in = load_element(file_a);
      RealQuadratic x = parse_quadratic(point_text);
      ReportWriter rep;
      rep.add("command", "eval");
      add_input(rep, "input_1", in);
      rep.add("point", to_string(x));
      rep.add("value", to_string(pp_eval(in.doc.element, x)));
      em.finish(rep);
      return kOk;
    }
    if (*cmd_support) {
      LoadedElement in = load_element(file_a);
      ReportWriter rep;
      rep.add("command", "support");
      add_input(rep, "input_1", in);
      rep.add("support", support_line(pp_support(in.doc.element)));
      em.finish(rep);
      return kOk;
    }
    if (*cmd_member) {
      LoadedElement in = load_element(file_a);
      PrimeSet T = PrimeSet::parse(primes_T);
      bool member = pp_in_subgroup(in.doc.element, T);
      ReportWriter rep;
      rep.add("command", "member");
      add_input(rep, "input_1", in);
      rep.add("ring", T.str());
      rep.add("verdict_member", member);
      em.finish(rep);
      return member ? kOk : kFailedCheck;
    }
    if (*cmd_lemma) {
      SL2Matrix h0 = parse_matrix(matrix_text);
      IntervalSpec I = parse_interval(interval_text);
      PrimeSet T = PrimeSet::parse(primes_T);
      auto [h, cert] = lemma_element(h0, I, T);
      cert.validate();
      ReportWriter rep;
      rep.add("command", "lemma-extend");
      rep.add("matrix", to_string(h0));
      rep.add("interval", to_string(I));
      rep.add("ring", T.str());
      rep.add("extension", format_element(cert.h1));
      rep.add("displacement", format_element(cert.b1));
      rep.add("element", format_element(h));
      rep.add("element_hash", hex64(fnv1a64(format_element(h))));
      rep.add("support", support_line(pp_support(h)));
      rep.add("verdict_certificate", true);
      if (!element_out.empty()) write_element(element_out, h);
      em.finish(rep);
      return kOk;
    }
    if (*cmd_wc) {
      LoadedElement in = load_element(file_a);
      PrimeSet S = PrimeSet::parse(primes_S);
      PrimeSet T = PrimeSet::parse(primes_T);
      CommensurationWitness w =
          commensuration_witness(in.doc.element, S, T, SearchBudget{}, pinned_p);
      w.certificate.validate();
      PPMap conj =
          pp_compose(pp_compose(pp_invert(in.doc.element), w.h), in.doc.element);
      bool inside = pp_in_subgroup(w.h, T);
      bool escapes = !pp_in_subgroup(conj, T);
      ReportWriter rep;
      rep.add("command", "witness commensurate");
      add_input(rep, "input_1", in);
      rep.add("ring_S", S.str());
      rep.add("ring_T", T.str());
      rep.add("prime", to_string(w.p));
      rep.add("seed_prime", to_string(w.q));
      rep.add("exponent", w.n);
      rep.add("offending_entry", std::string(1, w.offending_entry));
      rep.add("piece", to_string(w.piece_interval));
      rep.add("piece_matrix", to_string(w.piece_matrix));
      rep.add("inner_interval", to_string(w.inner_interval));
      rep.add("local_conjugate", to_string(w.local_conjugate));
      rep.add("element", format_element(w.h));
      rep.add("element_hash", hex64(fnv1a64(format_element(w.h))));
      rep.add("verdict_h_in_T", inside);
      rep.add("verdict_conjugate_escapes", escapes);
      if (!element_out.empty()) write_element(element_out, w.h);
      em.finish(rep);
      return inside && escapes ? kOk : kFailedCheck;
    }
    if (*cmd_wu) {
      LoadedElement in = load_element(file_a);
      PrimeSet T = PrimeSet::parse(primes_T);
      UnconfinementReport r = escape_report(in.doc.element, prime_p, T);
      r.validate();
      bool all_escape = true;
      for (long n = r.threshold; n <= r.threshold + 5; ++n) {
        PPMap gn = unconfinement_element(prime_p, n);
        PPMap conj =
            pp_compose(pp_compose(pp_invert(gn), in.doc.element), gn);
        if (pp_in_subgroup(conj, T)) all_escape = false;
      }
      ReportWriter rep;
      rep.add("command", "witness unconfine");
      add_input(rep, "input_1", in);
      rep.add("prime", to_string(prime_p));
      rep.add("ring", T.str());
      rep.add("threshold", r.threshold);
      rep.add("witness_piece", to_string(r.witness_interval));
      rep.add("witness_matrix", to_string(r.witness_matrix));
      for (const EscapeEvidence& row : r.evidence) {
        std::string key = "n_" + std::to_string(row.n);
        std::string line = "top_right=" + to_string(row.top_right);
        line += row.valuation ? ", valuation=" + std::to_string(*row.valuation)
                              : ", valuation=none";
        line += row.in_ring ? ", in_ring=yes" : ", in_ring=no";
        rep.add(key, line);
      }
      rep.add("verdict_escapes_from_threshold", all_escape);
      em.finish(rep);
      return all_escape ? kOk : kFailedCheck;
    }
    if (*cmd_escape) {
      PrimeSet T = PrimeSet::parse(primes_T);
      std::vector<std::string> paths = ppg_files_in(set_dir);
      if (paths.empty()) throw DomainError("no .ppg files in " + set_dir);
      std::vector<LoadedElement> inputs;
      std::vector<PPMap> E;
      for (const std::string& path : paths) {
        inputs.push_back(load_element(path));
        E.push_back(inputs.back().doc.element);
      }
      ChabautyResult cr = chabauty_escape(E, prime_p, T);
      ReportWriter rep;
      rep.add("command", "escape");
      rep.add("set", set_dir);
      rep.add("prime", to_string(prime_p));
      rep.add("ring", T.str());
      rep.add("elements", static_cast<long>(E.size()));
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        rep.add("element_" + std::to_string(i + 1),
                inputs[i].path + " hash=" + inputs[i].hash + " threshold=" +
                    std::to_string(cr.reports[i].threshold));
      }
      rep.add("common_exponent", cr.n);
      rep.add("verdict_escapes", true);
      em.finish(rep);
      return kOk;
    }
    if (*cmd_suite) {
      std::vector<CriterionResult> results =
          run_acceptance_suite(static_cast<std::uint64_t>(seed));
      ReportWriter rep;
      rep.add("command", "verify suite");
      rep.add("seed", seed);
      bool all = true;
      for (const CriterionResult& r : results) {
        all = all && r.pass;
        rep.add("criterion_" + std::to_string(r.index),
                std::string(r.pass ? "pass" : "fail") + " [" + r.name + "] " +
                    r.detail);
      }
      rep.add("verdict_suite", all);
      em.finish(rep);
      return all ? kOk : kFailedCheck;
    }
  } catch (const ParseError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const ValidationError& e) {
    err << "invalid element: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const PreconditionError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const Error& e) {
    err << "check failed: " << e.what() << "\n";
    return kFailedCheck;
  }
  err << "no subcommand executed\n";
  return kUsage;
}

}  // namespace ppg
