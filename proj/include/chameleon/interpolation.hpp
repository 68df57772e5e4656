#pragma once

#include <utility>
#include <vector>

#include "chameleon/pl_map.hpp"

namespace chameleon {

/// Closed arc of S_r running counterclockwise from lo to hi.
struct Arc {
  Rational lo;
  Rational hi;
};

/// Increasing PL map of a bounded interval; pieces[j] applies on
/// [cuts[j], cuts[j+1]], so cuts has one more entry than pieces.
struct IntervalMap {
  std::vector<Rational> cuts;
  std::vector<AffinePiece> pieces;

  Rational evaluate(const Rational& x) const;
};

/// Lengths n^j read off the base-n digits of len (n-adic, positive),
/// largest first.
std::vector<Rational> power_pieces(long n, const Rational& len);

/// Subdivisions of two lengths with equal phi_n into the same number of
/// power-of-n pieces.
std::pair<std::vector<Rational>, std::vector<Rational>> matched_subdivision(
    long n, const Rational& len_a, const Rational& len_b);

/// Map carrying xs[i] to ys[i] with power-of-n slopes. Consecutive gaps of xs
/// and ys must be n-adic with matching phi_n; both sequences increasing.
IntervalMap interpolate_interval(long n, const std::vector<Rational>& xs,
                                 const std::vector<Rational>& ys);

/// An element of BPL_n carrying xs[i] to ys[i]. Throws NotInDelta or
/// NotIncreasing.
PLLineMap interpolate_line(long n, const std::vector<Rational>& xs,
                           const std::vector<Rational>& ys);

/// An element of BPL_n equal to f on [a, b]. Throws NonzeroDn when d_n(f) != 0.
PLLineMap match_on_interval(long n, const PLLineMap& f, const Rational& a,
                            const Rational& b);

/// An element of BT_{n,r} taking points[i] into targets[i]. Throws
/// BadCyclicOrder unless both lists are counterclockwise and the targets
/// are disjoint.
PLCircleMap interpolate_circle(long n, long r, const std::vector<Rational>& points,
                               const std::vector<Arc>& targets);

/// Circle map on S_r whose lift restricted to the interval is `m`; the
/// interval must have length r and its image length r.
PLCircleMap circle_map_from_interval(long r, const IntervalMap& m);

}  // namespace chameleon
