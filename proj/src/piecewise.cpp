#include "ppg/piecewise.hpp"

#include <algorithm>
#include <utility>

namespace ppg {

std::string to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::empty_map: return "empty-map";
    case ViolationKind::bad_interval: return "bad-interval";
    case ViolationKind::gap: return "gap";
    case ViolationKind::overlap: return "overlap";
    case ViolationKind::discontinuity: return "discontinuity";
    case ViolationKind::pole_inside: return "pole-inside";
    case ViolationKind::nonaffine_end: return "nonaffine-end";
  }
  throw InternalError("bad violation kind");
}

namespace {

std::string describe(const std::vector<PieceViolation>& violations) {
  std::string out = "invalid piecewise map:";
  for (const PieceViolation& v : violations) {
    out += " [" + to_string(v.kind);
    if (v.where) out += " at " + to_string(*v.where);
    if (!v.detail.empty()) out += ": " + v.detail;
    out += "]";
  }
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<PieceViolation> violations)
    : Error(describe(violations)), violations_(std::move(violations)) {}

PPMap::PPMap()
    : pieces_{Piece{ExtendedReal::neg_inf(), ExtendedReal::pos_inf(),
                    SL2Matrix::identity()}} {}

PPMap PPMap::identity() { return PPMap(); }

bool PPMap::is_identity() const {
  return pieces_.size() == 1 && pieces_[0].matrix.is_identity();
}

PPMap pp_make(std::vector<Piece> pieces) {
  std::vector<PieceViolation> violations;
  if (pieces.empty()) {
    violations.push_back({ViolationKind::empty_map, "no pieces", {}, {}, {}});
    throw ValidationError(std::move(violations));
  }

  for (const Piece& p : pieces) {
    if (compare(p.lo, p.hi) != Ordering::less) {
      violations.push_back({ViolationKind::bad_interval,
                            "piece [" + to_string(p.lo) + "," + to_string(p.hi) +
                                "] is not an interval",
                            p.lo, {}, {}});
    }
    if ((!p.lo.is_finite() || !p.hi.is_finite()) && !p.matrix.is_affine()) {
      violations.push_back({ViolationKind::nonaffine_end,
                            "unbounded piece with matrix " + to_string(p.matrix),
                            p.lo, {}, {}});
    }
    if (std::optional<Rational> pole = p.matrix.pole()) {
      ExtendedReal pe{RealQuadratic(*pole)};
      if (compare(pe, p.lo) != Ordering::less &&
          compare(pe, p.hi) != Ordering::greater) {
        violations.push_back({ViolationKind::pole_inside,
                              "pole of " + to_string(p.matrix) + " in [" +
                                  to_string(p.lo) + "," + to_string(p.hi) + "]",
                              pe, {}, {}});
      }
    }
  }

  if (!pieces.front().lo.is_neg_inf()) {
    violations.push_back({ViolationKind::gap, "first piece does not start at -inf",
                          pieces.front().lo, {}, {}});
  }
  if (!pieces.back().hi.is_pos_inf()) {
    violations.push_back({ViolationKind::gap, "last piece does not end at +inf",
                          pieces.back().hi, {}, {}});
  }

  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    const ExtendedReal& left_hi = pieces[i].hi;
    const ExtendedReal& right_lo = pieces[i + 1].lo;
    Ordering tiling = compare(left_hi, right_lo);
    if (tiling == Ordering::less) {
      violations.push_back({ViolationKind::gap,
                            "pieces " + std::to_string(i) + " and " +
                                std::to_string(i + 1) + " leave a hole",
                            left_hi, {}, {}});
      continue;
    }
    if (tiling == Ordering::greater) {
      violations.push_back({ViolationKind::overlap,
                            "pieces " + std::to_string(i) + " and " +
                                std::to_string(i + 1) + " overlap",
                            right_lo, {}, {}});
      continue;
    }
    if (!left_hi.is_finite()) continue;  // reported as bad_interval already
    ProjPoint left_value = mob_apply(pieces[i].matrix, ProjPoint(left_hi.finite()));
    ProjPoint right_value =
        mob_apply(pieces[i + 1].matrix, ProjPoint(left_hi.finite()));
    if (!(left_value == right_value)) {
      violations.push_back({ViolationKind::discontinuity,
                            "values " + to_string(left_value) + " and " +
                                to_string(right_value),
                            left_hi, left_value, right_value});
    }
  }

  if (!violations.empty()) throw ValidationError(std::move(violations));

  std::vector<Piece> merged;
  for (Piece& p : pieces) {
    if (!merged.empty() && merged.back().matrix == p.matrix) {
      merged.back().hi = p.hi;  // merge equal neighbors
    } else {
      merged.push_back(std::move(p));
    }
  }
  return PPMap(std::move(merged));
}

RealQuadratic pp_eval(const PPMap& f, const RealQuadratic& x) {
  ExtendedReal ex{x};
  for (const Piece& p : f.pieces()) {
    if (compare(ex, p.hi) != Ordering::greater)
      return mob_apply_monotone(p.matrix, ex).finite();
  }
  throw InternalError("piece lookup fell off the map");
}

PPMap pp_invert(const PPMap& f) {
  std::vector<Piece> pieces;
  pieces.reserve(f.pieces().size());
  for (const Piece& p : f.pieces()) {
    pieces.push_back(Piece{mob_apply_monotone(p.matrix, p.lo),
                           mob_apply_monotone(p.matrix, p.hi),
                           p.matrix.inverse()});
  }
  return pp_make(std::move(pieces));
}

namespace {

// Interior rational sample of the interval cut out by neighbors in a sorted
// finite breakpoint list.
Rational interior_sample(const std::vector<RealQuadratic>& cuts, std::size_t i) {
  if (cuts.empty()) return 0;
  if (i == 0) {
    Integer below = floor_of(cuts.front()) - 1;
    return Rational(below);
  }
  if (i == cuts.size()) {
    Integer above = floor_of(cuts.back()) + 1;
    return Rational(above);
  }
  return rational_between(cuts[i - 1], cuts[i]);
}

const SL2Matrix& matrix_at(const PPMap& f, const RealQuadratic& x) {
  ExtendedReal ex{x};
  for (const Piece& p : f.pieces()) {
    if (compare(ex, p.hi) != Ordering::greater) return p.matrix;
  }
  throw InternalError("piece lookup fell off the map");
}

}  // namespace

PPMap pp_compose(const PPMap& f, const PPMap& g) {
  PPMap g_inv = pp_invert(g);
  std::vector<RealQuadratic> cuts;
  for (const Piece& p : g.pieces()) {
    if (p.hi.is_finite()) cuts.push_back(p.hi.finite());
  }
  for (const Piece& p : f.pieces()) {
    if (p.hi.is_finite()) cuts.push_back(pp_eval(g_inv, p.hi.finite()));
  }
  std::sort(cuts.begin(), cuts.end(),
            [](const RealQuadratic& a, const RealQuadratic& b) {
              return rq_compare(a, b) == Ordering::less;
            });
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Piece> pieces;
  pieces.reserve(cuts.size() + 1);
  for (std::size_t i = 0; i <= cuts.size(); ++i) {
    Rational s = interior_sample(cuts, i);
    const SL2Matrix& mg = matrix_at(g, RealQuadratic(s));
    const SL2Matrix& mf = matrix_at(f, pp_eval(g, RealQuadratic(s)));
    ExtendedReal lo = i == 0 ? ExtendedReal::neg_inf() : ExtendedReal(cuts[i - 1]);
    ExtendedReal hi =
        i == cuts.size() ? ExtendedReal::pos_inf() : ExtendedReal(cuts[i]);
    pieces.push_back(Piece{std::move(lo), std::move(hi), mf * mg});
  }
  return pp_make(std::move(pieces));
}

PPMap pp_commutator(const PPMap& f, const PPMap& g) {
  return pp_compose(pp_compose(pp_compose(f, g), pp_invert(f)), pp_invert(g));
}

SupportInterval pp_support(const PPMap& f) {
  SupportInterval out;
  out.lo = ExtendedReal(0);
  out.hi = ExtendedReal(0);
  std::size_t first = f.pieces().size(), last = 0;
  for (std::size_t i = 0; i < f.pieces().size(); ++i) {
    if (!f.pieces()[i].matrix.is_identity()) {
      first = std::min(first, i);
      last = i;
    }
  }
  if (first == f.pieces().size()) return out;  // identity: empty support
  out.empty = false;
  out.lo = f.pieces()[first].lo;
  out.hi = f.pieces()[last].hi;
  out.compact = out.lo.is_finite() && out.hi.is_finite();
  return out;
}

bool pp_in_subgroup(const PPMap& f, const PrimeSet& T) {
  for (const Piece& p : f.pieces()) {
    if (!entries_in_ring(p.matrix, T)) return false;
  }
  return true;
}

bool pp_equals(const PPMap& f, const PPMap& g) { return f == g; }

std::string to_string(const PPMap& f) {
  std::string out;
  for (const Piece& p : f.pieces()) {
    if (!out.empty()) out += ";";
    out += "(" + to_string(p.lo) + "," + to_string(p.hi) + "):" + to_string(p.matrix);
  }
  return out;
}

}  // namespace ppg
