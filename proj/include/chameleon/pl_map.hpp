#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "chameleon/exact_arith.hpp"
#include "chameleon/rational.hpp"

namespace chameleon {

/// x -> slope * x + intercept.
struct AffinePiece {
  Rational slope;
  Rational intercept;

  Rational at(const Rational& x) const { return slope * x + intercept; }

  friend bool operator==(const AffinePiece&, const AffinePiece&) = default;
};

/// Value of a map at an interior point together with its slope there; the
/// currency of the pointwise map builders.
struct LocalAffine {
  Rational value;
  Rational slope;
};

using LocalEvaluator = std::function<LocalAffine(const Rational&)>;

/// Continuous degree-d endomorphism of S_r with finitely many breaks, stored
/// in normal form: the breakpoints b_0 < ... < b_{p-1} in [0, r) are exactly
/// the points where the one-sided slopes differ, and piece i is the affine
/// lift on the arc [b_i, b_{i+1}] (the last arc runs to b_0 + r). The lift is
/// normalized so that lift(b_0) (or lift(0) without breaks) lies in [0, r).
///
/// A point on a breakpoint belongs to the piece on its right.
class PLCircleMap {
 public:
  /// Lift given on [0, r) as consecutive segments; cuts[0] must be 0 and
  /// pieces[j] applies on [cuts[j], cuts[j+1]). The lift must be continuous
  /// and increasing with lift(r) - lift(0) a positive multiple of r.
  static PLCircleMap from_segments(long r, std::vector<Rational> cuts,
                                   std::vector<AffinePiece> pieces);

  /// Accepts exactly a normal form (as produced by breakpoints()/pieces());
  /// throws ParseError otherwise.
  static PLCircleMap from_normal_form(long r, long degree,
                                      std::vector<Rational> breakpoints,
                                      std::vector<AffinePiece> pieces);

  /// Builds the map whose restriction to every gap between consecutive cuts
  /// is affine, sampling `local` at gap midpoints. The value returned by
  /// `local` only matters modulo r.
  static PLCircleMap from_evaluator(long r, std::vector<Rational> cuts,
                                    const LocalEvaluator& local);

  static PLCircleMap identity(long r);
  static PLCircleMap rotation(long r, const Rational& offset);
  /// x -> n x on S_r.
  static PLCircleMap multiplication(long n, long r);
  /// The degree-n map on S_{n-1}.
  static PLCircleMap nu(long n) { return multiplication(n, n - 1); }

  long circumference() const { return r_; }
  long degree() const { return degree_; }
  const std::vector<Rational>& breakpoints() const { return breakpoints_; }
  const std::vector<AffinePiece>& pieces() const { return pieces_; }

  /// Segment decomposition of [0, r): starts (first is 0) and lift pieces.
  const std::vector<Rational>& segment_starts() const { return seg_starts_; }
  const std::vector<AffinePiece>& segment_pieces() const { return seg_pieces_; }

  /// The lift at any real x; lift(x + r) = lift(x) + degree * r.
  Rational lift(const Rational& x) const;
  /// The unique real x with lift(x) = y.
  Rational lift_inverse(const Rational& y) const;

  /// Value in [0, r).
  Rational evaluate(const Rational& x) const;
  Rational operator()(const Rational& x) const { return evaluate(x); }

  Rational right_slope(const Rational& x) const;
  Rational left_slope(const Rational& x) const;

  /// All x in [0, r) with evaluate(x) == y mod r, increasing.
  std::vector<Rational> preimages(const Rational& y) const;

  friend bool operator==(const PLCircleMap&, const PLCircleMap&) = default;

 private:
  PLCircleMap() = default;
  std::size_t segment_index(const Rational& x_in_domain) const;

  long r_ = 1;
  long degree_ = 1;
  std::vector<Rational> breakpoints_;
  std::vector<AffinePiece> pieces_;
  std::vector<Rational> seg_starts_;
  std::vector<AffinePiece> seg_pieces_;
};

/// Homeomorphism of R with finitely many breaks and affine ends. Stored as an
/// increasing map A plus an orientation flag; the map itself is A or -A.
/// pieces() has breakpoints().size() + 1 entries: left end, bounded
/// intervals, right end. All stored slopes are positive.
class PLLineMap {
 public:
  static PLLineMap from_normal_form(bool reversing,
                                    std::vector<Rational> breakpoints,
                                    std::vector<AffinePiece> pieces);
  /// `local` reports the actual (possibly decreasing) map.
  static PLLineMap from_evaluator(std::vector<Rational> cuts,
                                  const LocalEvaluator& local);
  static PLLineMap identity();
  static PLLineMap affine(const Rational& slope, const Rational& intercept);

  bool reversing() const { return reversing_; }
  const std::vector<Rational>& breakpoints() const { return breakpoints_; }
  const std::vector<AffinePiece>& pieces() const { return pieces_; }
  const AffinePiece& left_end() const { return pieces_.front(); }
  const AffinePiece& right_end() const { return pieces_.back(); }

  Rational evaluate(const Rational& x) const;
  Rational operator()(const Rational& x) const { return evaluate(x); }
  /// Unique x with evaluate(x) = y.
  Rational inverse_value(const Rational& y) const;

  /// Signed one-sided slopes of the map itself.
  Rational right_slope(const Rational& x) const;
  Rational left_slope(const Rational& x) const;

  friend bool operator==(const PLLineMap&, const PLLineMap&) = default;

 private:
  PLLineMap() = default;
  std::size_t piece_index(const Rational& x) const;
  Rational increasing_value(const Rational& x) const;

  bool reversing_ = false;
  std::vector<Rational> breakpoints_;
  std::vector<AffinePiece> pieces_;
};

enum class Family { PL_n, BPL_n, F_n, T_nr, BT_nr, Tbar_nr, Aff_n };

std::string to_string(Family f);

struct MembershipReport {
  /// (1) PL, (2) orientation preserving, (3) slopes powers of n,
  /// (4) breaks in Z[1/n], (5) Z[1/n] carried into Z[1/n].
  std::array<bool, 5> conditions{};
  std::set<Family> tags;
  /// (i, j): x + i(n-1) near +infinity, x + j(n-1) near -infinity.
  std::optional<std::pair<long, long>> end_translations;
  std::optional<long> d_n_value;

  bool has(Family f) const { return tags.count(f) != 0; }
};

PLCircleMap compose(const PLCircleMap& outer, const PLCircleMap& inner);
PLLineMap compose(const PLLineMap& outer, const PLLineMap& inner);

/// Throws NotInvertible when the degree exceeds 1.
PLCircleMap invert(const PLCircleMap& m);
PLLineMap invert(const PLLineMap& m);

MembershipReport classify(const PLCircleMap& m, long n);
MembershipReport classify(const PLLineMap& m, long n);

/// log_n of right slope / left slope; NotAPowerRatio otherwise.
long break_value(const PLCircleMap& m, const Rational& x, long n);
long break_value(const PLLineMap& m, const Rational& x, long n);

/// Total of the break values over all breakpoints.
long sum_of_breaks(const PLCircleMap& m, long n);

/// phi_n(m(x)) - phi_n(x), checked at three n-adic points.
long d_n(const PLLineMap& m, long n);

struct Orbit {
  std::vector<Rational> pre_period;
  std::vector<Rational> cycle;

  bool reaches_fixed_point() const { return cycle.size() == 1; }
};

/// Forward orbit of x up to its first repetition. Throws BudgetExceeded if no
/// point repeats within max_steps applications of m.
Orbit orbit(const PLCircleMap& m, const Rational& x, std::int64_t max_steps);

/// m composed with itself k times (k >= 1).
PLCircleMap iterate(const PLCircleMap& m, int k);

/// A point of Z[1/n] strictly between lo and hi (lo < hi).
Rational nadic_point_between(const Rational& lo, const Rational& hi, long n);

}  // namespace chameleon
