#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ppg/cli.hpp"
#include "ppg/constructions.hpp"
#include "ppg/text.hpp"

using namespace ppg;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_command(args, out, err);
  return CliRun{code, out.str(), err.str()};
}

bool has_line(const std::string& text, const std::string& line) {
  std::istringstream in(text);
  for (std::string got; std::getline(in, got);)
    if (got == line) return true;
  return false;
}

bool ends_with_timing(const std::string& text) {
  std::size_t pos = text.rfind("wall_time_ms: ");
  if (pos == std::string::npos) return false;
  if (pos != 0 && text[pos - 1] != '\n') return false;
  return text.find('\n', pos) == text.size() - 1;
}

struct TempDir {
  std::filesystem::path dir;

  TempDir() {
    static int counter = 0;
    dir = std::filesystem::temp_directory_path() /
          ("ppg_cli_" + std::to_string(::getpid()) + "_" + std::to_string(++counter));
    std::filesystem::create_directories(dir);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(dir, ec);
  }

  std::string file(const std::string& name, const std::string& text) {
    std::filesystem::path p = dir / name;
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const char* kShift = "(-inf,+inf):[[1,1],[0,1]]\n";
const char* kIdentity = "(-inf,+inf):[[1,0],[0,1]]\n";

std::string bump_text(const SL2Matrix& M) {
  FixedPointData fp = mob_fixed_points(M);
  RealQuadratic u = fp.points[0].finite();
  RealQuadratic v = fp.points[1].finite();
  if (rq_compare(u, v) == Ordering::greater) std::swap(u, v);
  PPMap f = pp_make({Piece{ExtendedReal::neg_inf(), ExtendedReal(u), SL2Matrix::identity()},
                     Piece{ExtendedReal(u), ExtendedReal(v), M},
                     Piece{ExtendedReal(v), ExtendedReal::pos_inf(), SL2Matrix::identity()}});
  return format_element(f) + "\n";
}

}  // namespace

TEST_CASE("cli usage handling") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"--help"}).out.find("Usage") != std::string::npos);
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"member"}).code == 1);       // missing required option
  CHECK(run({"witness"}).code == 1);      // missing nested subcommand
  CHECK(run({}).out.empty());
}

TEST_CASE("cli parse normalizes and reports") {
  TempDir tmp;
  std::string messy = tmp.file(
      "messy.ppg", "# name: shifty\n( -inf , 0 ) : [[1,1],[0,1]] ;\n(0,+inf):[[1,1],[0,1]]\n");
  CliRun r = run({"parse", messy});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "command: parse"));
  CHECK(has_line(r.out, "input_1: " + messy));
  CHECK(has_line(r.out, "input_1_name: shifty"));
  CHECK(has_line(r.out, "element: (-inf,+inf):[[1,1],[0,1]]"));
  CHECK(has_line(r.out, "pieces: 1"));
  CHECK(ends_with_timing(r.out));
}

TEST_CASE("cli input failures exit with code 2") {
  TempDir tmp;
  CliRun missing = run({"parse", tmp.path("nope.ppg")});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("cannot open") != std::string::npos);

  std::string gap = tmp.file("gap.ppg", "(-inf,0):[[1,0],[0,1]]\n");
  CHECK(run({"parse", gap}).code == 2);

  std::string bad = tmp.file("bad.ppg", "(-inf,+inf):[[2,1],[1,2]]\n");
  CliRun r = run({"parse", bad});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 1") != std::string::npos);
  CHECK(run({"parse", tmp.file("trunc.ppg", "(-inf,+inf):[[1,0],[0,1]\n")}).code == 2);
}

TEST_CASE("cli format writes a canonical element file") {
  TempDir tmp;
  std::string messy = tmp.file("m.ppg", "( -inf ,  +inf ):[[1, 1],[0, 1]]\n");
  std::string out_path = tmp.path("canon.ppg");
  CHECK(run({"format", messy, "--element-out", out_path}).code == 0);
  CHECK(read_file(out_path) == kShift);
  // A canonical file is a fixed point of formatting.
  CHECK(run({"format", out_path, "--element-out", tmp.path("again.ppg")}).code == 0);
  CHECK(read_file(tmp.path("again.ppg")) == kShift);
}

TEST_CASE("cli group operations") {
  TempDir tmp;
  std::string shift = tmp.file("shift.ppg", kShift);

  CliRun twice = run({"compose", shift, shift});
  CHECK(twice.code == 0);
  CHECK(has_line(twice.out, "element: (-inf,+inf):[[1,2],[0,1]]"));

  CliRun inv = run({"invert", shift});
  CHECK(inv.code == 0);
  CHECK(has_line(inv.out, "element: (-inf,+inf):[[1,-1],[0,1]]"));

  CliRun comm = run({"commutator", shift, shift});
  CHECK(comm.code == 0);
  CHECK(has_line(comm.out, "element: (-inf,+inf):[[1,0],[0,1]]"));
}

TEST_CASE("cli eval and support") {
  TempDir tmp;
  std::string shift = tmp.file("shift.ppg", kShift);
  std::string ident = tmp.file("id.ppg", kIdentity);
  std::string golden = tmp.file("golden.ppg", bump_text(SL2Matrix(2, 1, 1, 1)));

  CliRun at_half = run({"eval", shift, "1/2"});
  CHECK(at_half.code == 0);
  CHECK(has_line(at_half.out, "value: 3/2"));

  CliRun at_phi = run({"eval", shift, "1/2+1/2*sqrt(5)"});
  CHECK(has_line(at_phi.out, "value: 3/2+1/2*sqrt(5)"));

  CHECK(run({"eval", shift, "bogus"}).code == 2);

  CHECK(has_line(run({"support", ident}).out, "support: empty"));
  CHECK(has_line(run({"support", shift}).out, "support: noncompact"));
  CHECK(has_line(run({"support", golden}).out,
                 "support: [1/2-1/2*sqrt(5),1/2+1/2*sqrt(5)]"));
}

TEST_CASE("cli membership verdict drives the exit code") {
  TempDir tmp;
  std::string shift = tmp.file("shift.ppg", kShift);
  std::string third = tmp.file("third.ppg", "(-inf,+inf):[[1,1/3],[0,1]]\n");

  CliRun yes = run({"member", shift, "--T", "2"});
  CHECK(yes.code == 0);
  CHECK(has_line(yes.out, "verdict_member: pass"));

  CliRun no = run({"member", third, "--T", "2"});
  CHECK(no.code == 3);
  CHECK(has_line(no.out, "verdict_member: fail"));

  CHECK(run({"member", third, "--T", "3"}).code == 0);
  CHECK(run({"member", third, "--T", "6"}).code == 2);  // 6 is not prime
}

TEST_CASE("cli lemma-extend produces a certified element") {
  TempDir tmp;
  std::string out_path = tmp.path("ext.ppg");
  CliRun r = run({"lemma-extend", "--matrix", "[[1,1],[0,1]]", "--interval",
                  "[0,1]", "--T", "2", "--element-out", out_path});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "verdict_certificate: pass"));
  CHECK(ends_with_timing(r.out));

  // The written element is a member of the 2-subgroup with compact support.
  CHECK(run({"member", out_path, "--T", "2"}).code == 0);
  std::string support = run({"support", out_path}).out;
  CHECK(support.find("support: [") != std::string::npos);
  // It agrees with the matrix on the interval.
  CHECK(has_line(run({"eval", out_path, "1/2"}).out, "value: 3/2"));

  CHECK(run({"lemma-extend", "--matrix", "[[1,1],[0,1]]", "--interval", "[1,0]",
             "--T", "2"})
            .code == 2);
  CHECK(run({"lemma-extend", "--matrix", "[[1,1/3],[0,1]]", "--interval",
             "[0,1]", "--T", "2"})
            .code == 2);
}

TEST_CASE("cli commensuration witness") {
  TempDir tmp;
  std::string half = tmp.file("half.ppg", "(-inf,+inf):[[1,1/2],[0,1]]\n");
  std::string witness_out = tmp.path("h.ppg");

  CliRun r = run({"witness", "commensurate", "--g", half, "--S", "2,3", "--T",
                  "3", "--element-out", witness_out});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "prime: 2"));
  CHECK(has_line(r.out, "seed_prime: 3"));
  CHECK(has_line(r.out, "offending_entry: b"));
  CHECK(has_line(r.out, "verdict_h_in_T: pass"));
  CHECK(has_line(r.out, "verdict_conjugate_escapes: pass"));
  CHECK(run({"member", witness_out, "--T", "3"}).code == 0);

  // Pinned prime with no offending entry.
  CHECK(run({"witness", "commensurate", "--g", half, "--S", "2,3", "--T", "3",
             "--p", "3"})
            .code == 2);
  // Element already inside the T-subgroup.
  std::string shift = tmp.file("shift.ppg", kShift);
  CHECK(run({"witness", "commensurate", "--g", shift, "--S", "2,3", "--T", "3"})
            .code == 2);
}

TEST_CASE("cli unconfinement witness") {
  TempDir tmp;
  std::string shift = tmp.file("shift.ppg", kShift);
  CliRun r = run({"witness", "unconfine", "--element", shift, "--p", "2",
                  "--T", "3"});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "threshold: 1"));
  CHECK(has_line(r.out, "witness_matrix: [[1,1],[0,1]]"));
  CHECK(has_line(r.out, "n_1: top_right=1/4, valuation=-2, in_ring=no"));
  CHECK(has_line(r.out, "verdict_escapes_from_threshold: pass"));

  std::string slow = tmp.file("slow.ppg", bump_text(SL2Matrix(13, 4, 16, 5)));
  CliRun s = run({"witness", "unconfine", "--element", slow, "--p", "2", "--T", "3"});
  CHECK(s.code == 0);
  CHECK(has_line(s.out, "threshold: 2"));
  CHECK(has_line(s.out, "n_1: top_right=1, valuation=0, in_ring=yes"));
  CHECK(has_line(s.out, "n_2: top_right=5/16, valuation=-4, in_ring=no"));

  CHECK(run({"witness", "unconfine", "--element", shift, "--p", "3", "--T", "3"})
            .code == 2);
  std::string ident = tmp.file("id.ppg", kIdentity);
  CHECK(run({"witness", "unconfine", "--element", ident, "--p", "2", "--T", "3"})
            .code == 2);
}

TEST_CASE("cli escape over a directory") {
  TempDir tmp;
  tmp.file("a_shift.ppg", kShift);
  tmp.file("b_golden.ppg", bump_text(SL2Matrix(2, 1, 1, 1)));
  tmp.file("notes.txt", "ignored: wrong extension\n");

  CliRun r = run({"escape", "--set", tmp.dir.string(), "--p", "2", "--T", "3"});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "elements: 2"));
  CHECK(has_line(r.out, "common_exponent: 1"));
  CHECK(r.out.find("a_shift.ppg") != std::string::npos);
  CHECK(has_line(r.out, "verdict_escapes: pass"));

  tmp.file("c_slow.ppg", bump_text(SL2Matrix(13, 4, 16, 5)));
  CliRun s = run({"escape", "--set", tmp.dir.string(), "--p", "2", "--T", "3"});
  CHECK(s.code == 0);
  CHECK(has_line(s.out, "elements: 3"));
  CHECK(has_line(s.out, "common_exponent: 2"));

  CHECK(run({"escape", "--set", tmp.path("void"), "--p", "2", "--T", "3"}).code == 2);
}

TEST_CASE("cli --out duplicates the report to a file") {
  TempDir tmp;
  std::string shift = tmp.file("shift.ppg", kShift);
  std::string report = tmp.path("report.txt");
  CliRun r = run({"eval", shift, "2", "--out", report});
  CHECK(r.code == 0);
  CHECK(read_file(report) == r.out);
  CHECK(has_line(r.out, "value: 3"));
}
