#include "chameleon/pl_map.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "chameleon/error.hpp"

namespace chameleon {

namespace {

void sort_unique(std::vector<Rational>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

[[noreturn]] void bad_map(const std::string& why) {
  throw Error(ErrorKind::PreconditionFailed, why);
}

bool is_power_slope(const Rational& s, long n) {
  return exact_log(s.abs(), n).has_value();
}

// phi_n(y) - phi_n(x) reduced into [0, modulus).
long residue_shift(const Rational& x, const Rational& y, long n, long modulus) {
  long d = (phi_n(y, n) - phi_n(x, n)) % modulus;
  return d < 0 ? d + modulus : d;
}

}  // namespace

Rational nadic_point_between(const Rational& lo, const Rational& hi, long n) {
  if (!(lo < hi)) bad_map("empty interval");
  for (long e = 0;; ++e) {
    Rational scale = Rational::power(n, e);
    Rational a(BigInt((lo * scale).floor() + 1));
    Rational candidate = a / scale;
    if (candidate < hi) return candidate;
  }
}

// ---------------------------------------------------------------- circle ---

PLCircleMap PLCircleMap::from_segments(long r, std::vector<Rational> cuts,
                                       std::vector<AffinePiece> pieces) {
  if (r <= 0) bad_map("circumference must be positive");
  if (cuts.empty() || cuts.size() != pieces.size()) {
    bad_map("segment cuts and pieces disagree in number");
  }
  if (!cuts.front().is_zero()) bad_map("first segment must start at 0");
  const Rational R(r);
  for (std::size_t j = 0; j < cuts.size(); ++j) {
    if (pieces[j].slope.sign() <= 0) bad_map("lift must be increasing");
    if (j > 0 && !(cuts[j - 1] < cuts[j])) bad_map("cuts must increase");
    if (j > 0 && pieces[j - 1].at(cuts[j]) != pieces[j].at(cuts[j])) {
      bad_map("lift is discontinuous at " + cuts[j].str());
    }
  }
  if (!(cuts.back() < R)) bad_map("cut outside [0, r)");
  Rational total = pieces.back().at(R) - pieces.front().at(Rational(0));
  Rational turns = total / R;
  if (!turns.is_integer() || turns.sign() <= 0) {
    bad_map("lift does not close up to a positive degree");
  }

  PLCircleMap m;
  m.r_ = r;
  m.degree_ = to_int64(turns.num());

  // Merge equal neighbours; continuity makes equal slope mean equal piece.
  std::vector<Rational> starts{cuts[0]};
  std::vector<AffinePiece> segs{pieces[0]};
  for (std::size_t j = 1; j < cuts.size(); ++j) {
    if (pieces[j].slope != segs.back().slope) {
      starts.push_back(cuts[j]);
      segs.push_back(pieces[j]);
    }
  }
  bool zero_is_break = segs.back().slope != segs.front().slope;
  for (std::size_t j = 0; j < starts.size(); ++j) {
    if (j > 0 || zero_is_break) m.breakpoints_.push_back(starts[j]);
  }

  Rational base = m.breakpoints_.empty() ? Rational(0) : m.breakpoints_.front();
  std::size_t base_seg = m.breakpoints_.empty() || zero_is_break ? 0 : 1;
  Rational shift = R * Rational(BigInt((segs[base_seg].at(base) / R).floor()));
  for (auto& p : segs) p.intercept -= shift;

  if (m.breakpoints_.empty()) {
    m.pieces_ = {segs.front()};
  } else {
    m.pieces_.assign(segs.begin() + static_cast<long>(base_seg), segs.end());
  }
  m.seg_starts_ = std::move(starts);
  m.seg_pieces_ = std::move(segs);
  return m;
}

PLCircleMap PLCircleMap::from_normal_form(long r, long degree,
                                          std::vector<Rational> breakpoints,
                                          std::vector<AffinePiece> pieces) {
  if (r <= 0 || degree < 1) throw Error(ErrorKind::ParseError, "bad circle header");
  std::size_t p = breakpoints.size();
  if (pieces.size() != std::max<std::size_t>(p, 1)) {
    throw Error(ErrorKind::ParseError, "circle map needs one piece per arc");
  }
  const Rational R(r);
  for (std::size_t i = 0; i < p; ++i) {
    if (breakpoints[i].sign() < 0 || !(breakpoints[i] < R) ||
        (i > 0 && !(breakpoints[i - 1] < breakpoints[i]))) {
      throw Error(ErrorKind::ParseError, "breakpoints must increase within [0, r)");
    }
  }
  std::vector<Rational> cuts;
  std::vector<AffinePiece> segs;
  if (p > 0 && breakpoints.front().sign() > 0) {
    const auto& last = pieces.back();
    cuts.emplace_back(0);
    segs.push_back({last.slope, last.intercept + last.slope * R -
                                    Rational(degree) * R});
  }
  if (p == 0) {
    cuts.emplace_back(0);
    segs.push_back(pieces.front());
  }
  for (std::size_t i = 0; i < p; ++i) {
    cuts.push_back(breakpoints[i]);
    segs.push_back(pieces[i]);
  }
  PLCircleMap m = [&] {
    try {
      return from_segments(r, cuts, segs);
    } catch (const Error& e) {
      throw Error(ErrorKind::ParseError, e.what());
    }
  }();
  if (m.degree_ != degree || m.breakpoints_ != breakpoints || m.pieces_ != pieces) {
    throw Error(ErrorKind::ParseError, "circle map is not in normal form");
  }
  return m;
}

PLCircleMap PLCircleMap::from_evaluator(long r, std::vector<Rational> cuts,
                                        const LocalEvaluator& local) {
  const Rational R(r);
  for (auto& c : cuts) c = c.mod(R);
  cuts.emplace_back(0);
  sort_unique(cuts);
  std::vector<AffinePiece> pieces;
  pieces.reserve(cuts.size());
  for (std::size_t j = 0; j < cuts.size(); ++j) {
    const Rational& right = j + 1 < cuts.size() ? cuts[j + 1] : R;
    Rational mid = (cuts[j] + right) / Rational(2);
    LocalAffine la = local(mid);
    AffinePiece piece{la.slope, la.value - la.slope * mid};
    if (j > 0) {
      Rational jump = pieces.back().at(cuts[j]) - piece.at(cuts[j]);
      if (!(jump / R).is_integer()) {
        bad_map("map is discontinuous at " + cuts[j].str());
      }
      piece.intercept += jump;
    }
    pieces.push_back(std::move(piece));
  }
  return from_segments(r, std::move(cuts), std::move(pieces));
}

PLCircleMap PLCircleMap::identity(long r) { return multiplication(1, r); }

PLCircleMap PLCircleMap::rotation(long r, const Rational& offset) {
  const Rational R(r);
  return from_segments(r, {Rational(0)}, {{Rational(1), offset.mod(R)}});
}

PLCircleMap PLCircleMap::multiplication(long n, long r) {
  if (n < 1) bad_map("multiplier must be positive");
  return from_segments(r, {Rational(0)}, {{Rational(n), Rational(0)}});
}

std::size_t PLCircleMap::segment_index(const Rational& u) const {
  auto it = std::upper_bound(seg_starts_.begin(), seg_starts_.end(), u);
  return static_cast<std::size_t>(it - seg_starts_.begin()) - 1;
}

Rational PLCircleMap::lift(const Rational& x) const {
  const Rational R(r_);
  BigInt k = (x / R).floor();
  Rational u = x - Rational(k) * R;
  return seg_pieces_[segment_index(u)].at(u) + Rational(k) * Rational(degree_) * R;
}

Rational PLCircleMap::lift_inverse(const Rational& y) const {
  const Rational R(r_);
  const Rational period = Rational(degree_) * R;
  const Rational l0 = seg_pieces_.front().at(Rational(0));
  Rational k(BigInt(((y - l0) / period).floor()));
  Rational yy = y - k * period;
  std::size_t j = seg_starts_.size() - 1;
  while (j > 0 && seg_pieces_[j].at(seg_starts_[j]) > yy) --j;
  const AffinePiece& p = seg_pieces_[j];
  return (yy - p.intercept) / p.slope + k * R;
}

Rational PLCircleMap::evaluate(const Rational& x) const {
  return lift(x).mod(Rational(r_));
}

Rational PLCircleMap::right_slope(const Rational& x) const {
  return seg_pieces_[segment_index(x.mod(Rational(r_)))].slope;
}

Rational PLCircleMap::left_slope(const Rational& x) const {
  Rational u = x.mod(Rational(r_));
  if (u.is_zero()) return seg_pieces_.back().slope;
  auto it = std::lower_bound(seg_starts_.begin(), seg_starts_.end(), u);
  return seg_pieces_[static_cast<std::size_t>(it - seg_starts_.begin()) - 1].slope;
}

std::vector<Rational> PLCircleMap::preimages(const Rational& y) const {
  const Rational R(r_);
  const Rational l0 = seg_pieces_.front().at(Rational(0));
  Rational y0 = y.mod(R);
  // Lifted targets y0 + mR in [l0, l0 + dR).
  Rational first = y0 + R * Rational(BigInt(((l0 - y0) / R).ceil()));
  std::vector<Rational> out;
  out.reserve(static_cast<std::size_t>(degree_));
  for (long t = 0; t < degree_; ++t) {
    out.push_back(lift_inverse(first + Rational(t) * R));
  }
  return out;
}

PLCircleMap compose(const PLCircleMap& outer, const PLCircleMap& inner) {
  if (outer.circumference() != inner.circumference()) {
    bad_map("composing maps on different circles");
  }
  std::vector<Rational> cuts = inner.segment_starts();
  for (const auto& b : outer.segment_starts()) {
    auto pre = inner.preimages(b);
    cuts.insert(cuts.end(), pre.begin(), pre.end());
  }
  return PLCircleMap::from_evaluator(
      inner.circumference(), std::move(cuts), [&](const Rational& x) {
        Rational y = inner.lift(x);
        return LocalAffine{outer.lift(y), outer.right_slope(y) * inner.right_slope(x)};
      });
}

PLCircleMap invert(const PLCircleMap& m) {
  if (m.degree() != 1) {
    throw Error(ErrorKind::NotInvertible,
                "degree " + std::to_string(m.degree()) + " map has no inverse");
  }
  std::vector<Rational> cuts;
  for (const auto& b : m.segment_starts()) cuts.push_back(m.evaluate(b));
  return PLCircleMap::from_evaluator(
      m.circumference(), std::move(cuts), [&](const Rational& y) {
        Rational x = m.lift_inverse(y);
        return LocalAffine{x, Rational(1) / m.right_slope(x)};
      });
}

PLCircleMap iterate(const PLCircleMap& m, int k) {
  if (k < 1) bad_map("iterate needs k >= 1");
  PLCircleMap out = m;
  for (int i = 1; i < k; ++i) out = compose(m, out);
  return out;
}

// ------------------------------------------------------------------ line ---

namespace {

struct LineData {
  std::vector<Rational> cuts;
  std::vector<AffinePiece> pieces;
};

// Checks continuity and positivity, then drops cuts between equal pieces.
LineData normalize_line(LineData in, ErrorKind kind) {
  if (in.pieces.size() != in.cuts.size() + 1) {
    throw Error(kind, "line map needs one more piece than breakpoints");
  }
  for (std::size_t i = 0; i < in.pieces.size(); ++i) {
    if (in.pieces[i].slope.sign() <= 0) throw Error(kind, "slopes must be positive");
  }
  for (std::size_t i = 0; i < in.cuts.size(); ++i) {
    if (i > 0 && !(in.cuts[i - 1] < in.cuts[i])) {
      throw Error(kind, "breakpoints must increase");
    }
    if (in.pieces[i].at(in.cuts[i]) != in.pieces[i + 1].at(in.cuts[i])) {
      throw Error(kind, "line map is discontinuous at " + in.cuts[i].str());
    }
  }
  LineData out;
  out.pieces.push_back(in.pieces[0]);
  for (std::size_t i = 0; i < in.cuts.size(); ++i) {
    if (in.pieces[i + 1] != out.pieces.back()) {
      out.cuts.push_back(in.cuts[i]);
      out.pieces.push_back(in.pieces[i + 1]);
    }
  }
  return out;
}

}  // namespace

PLLineMap PLLineMap::from_normal_form(bool reversing,
                                      std::vector<Rational> breakpoints,
                                      std::vector<AffinePiece> pieces) {
  LineData d = normalize_line({std::move(breakpoints), std::move(pieces)},
                              ErrorKind::ParseError);
  PLLineMap m;
  m.reversing_ = reversing;
  m.breakpoints_ = std::move(d.cuts);
  m.pieces_ = std::move(d.pieces);
  return m;
}

PLLineMap PLLineMap::from_evaluator(std::vector<Rational> cuts,
                                    const LocalEvaluator& local) {
  sort_unique(cuts);
  std::vector<Rational> samples;
  if (cuts.empty()) {
    samples.emplace_back(0);
  } else {
    samples.push_back(cuts.front() - Rational(1));
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      samples.push_back((cuts[i] + cuts[i + 1]) / Rational(2));
    }
    samples.push_back(cuts.back() + Rational(1));
  }
  std::vector<AffinePiece> pieces;
  int orientation = 0;
  for (const auto& x : samples) {
    LocalAffine la = local(x);
    int s = la.slope.sign();
    if (s == 0 || (orientation != 0 && s != orientation)) {
      bad_map("line map is not monotone");
    }
    orientation = s;
    AffinePiece p{la.slope, la.value - la.slope * x};
    if (s < 0) p = {-p.slope, -p.intercept};
    pieces.push_back(std::move(p));
  }
  LineData d = normalize_line({std::move(cuts), std::move(pieces)},
                              ErrorKind::PreconditionFailed);
  PLLineMap m;
  m.reversing_ = orientation < 0;
  m.breakpoints_ = std::move(d.cuts);
  m.pieces_ = std::move(d.pieces);
  return m;
}

PLLineMap PLLineMap::identity() { return affine(Rational(1), Rational(0)); }

PLLineMap PLLineMap::affine(const Rational& slope, const Rational& intercept) {
  if (slope.is_zero()) bad_map("zero slope");
  PLLineMap m;
  m.reversing_ = slope.sign() < 0;
  m.pieces_ = {m.reversing_ ? AffinePiece{-slope, -intercept}
                            : AffinePiece{slope, intercept}};
  return m;
}

std::size_t PLLineMap::piece_index(const Rational& x) const {
  return static_cast<std::size_t>(
      std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x) -
      breakpoints_.begin());
}

Rational PLLineMap::increasing_value(const Rational& x) const {
  return pieces_[piece_index(x)].at(x);
}

Rational PLLineMap::evaluate(const Rational& x) const {
  Rational v = increasing_value(x);
  return reversing_ ? -v : v;
}

Rational PLLineMap::inverse_value(const Rational& y) const {
  Rational z = reversing_ ? -y : y;
  std::size_t i = 0;
  while (i < breakpoints_.size() && pieces_[i + 1].at(breakpoints_[i]) <= z) ++i;
  return (z - pieces_[i].intercept) / pieces_[i].slope;
}

Rational PLLineMap::right_slope(const Rational& x) const {
  const Rational& s = pieces_[piece_index(x)].slope;
  return reversing_ ? -s : s;
}

Rational PLLineMap::left_slope(const Rational& x) const {
  auto i = static_cast<std::size_t>(
      std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x) -
      breakpoints_.begin());
  const Rational& s = pieces_[i].slope;
  return reversing_ ? -s : s;
}

PLLineMap compose(const PLLineMap& outer, const PLLineMap& inner) {
  std::vector<Rational> cuts = inner.breakpoints();
  for (const auto& b : outer.breakpoints()) cuts.push_back(inner.inverse_value(b));
  return PLLineMap::from_evaluator(std::move(cuts), [&](const Rational& x) {
    Rational y = inner.evaluate(x);
    return LocalAffine{outer.evaluate(y), outer.right_slope(y) * inner.right_slope(x)};
  });
}

PLLineMap invert(const PLLineMap& m) {
  std::vector<Rational> cuts;
  for (const auto& b : m.breakpoints()) cuts.push_back(m.evaluate(b));
  return PLLineMap::from_evaluator(std::move(cuts), [&](const Rational& y) {
    Rational x = m.inverse_value(y);
    return LocalAffine{x, Rational(1) / m.right_slope(x)};
  });
}

// -------------------------------------------------------------- analysis ---

std::string to_string(Family f) {
  switch (f) {
    case Family::PL_n: return "PL_n";
    case Family::BPL_n: return "BPL_n";
    case Family::F_n: return "F_n";
    case Family::T_nr: return "T_n,r";
    case Family::BT_nr: return "BT_n,r";
    case Family::Tbar_nr: return "Tbar_n,r";
    case Family::Aff_n: return "Aff_n";
  }
  return "?";
}

namespace {

long break_from_slopes(const Rational& left, const Rational& right, long n,
                       const Rational& x) {
  auto k = exact_log(right / left, n);
  if (!k) {
    throw Error(ErrorKind::NotAPowerRatio,
                "slope ratio " + (right / left).str() + " at " + x.str() +
                    " is not a power of " + std::to_string(n));
  }
  return *k;
}

}  // namespace

long break_value(const PLCircleMap& m, const Rational& x, long n) {
  return break_from_slopes(m.left_slope(x), m.right_slope(x), n, x);
}

long break_value(const PLLineMap& m, const Rational& x, long n) {
  return break_from_slopes(m.left_slope(x), m.right_slope(x), n, x);
}

long sum_of_breaks(const PLCircleMap& m, long n) {
  long total = 0;
  for (const auto& b : m.breakpoints()) total += break_value(m, b, n);
  return total;
}

long d_n(const PLLineMap& m, long n) {
  if (n < 2) bad_map("base must be >= 2");
  const long mod = n - 1;
  std::optional<long> d;
  for (const Rational& x : {Rational(0), Rational(1), Rational(1, n)}) {
    Rational y = m.evaluate(x);
    if (!is_nadic(y, n)) {
      throw Error(ErrorKind::InconsistentResidue,
                  "image " + y.str() + " of " + x.str() + " is not n-adic");
    }
    long here = residue_shift(x, y, n, mod);
    if (d && *d != here) {
      throw Error(ErrorKind::InconsistentResidue,
                  "residue shift " + std::to_string(here) + " at " + x.str() +
                      " differs from " + std::to_string(*d));
    }
    d = here;
  }
  return *d;
}

MembershipReport classify(const PLCircleMap& m, long n) {
  MembershipReport rep;
  const auto& starts = m.segment_starts();
  const auto& segs = m.segment_pieces();
  const Rational R(m.circumference());

  rep.conditions[0] = true;
  rep.conditions[1] = true;
  rep.conditions[2] = std::all_of(segs.begin(), segs.end(), [&](const AffinePiece& p) {
    return is_power_slope(p.slope, n);
  });
  rep.conditions[3] = std::all_of(m.breakpoints().begin(), m.breakpoints().end(),
                                  [&](const Rational& b) { return is_nadic(b, n); });
  bool carries = true;
  std::vector<Rational> samples;
  for (std::size_t j = 0; j < starts.size(); ++j) {
    const Rational& right = j + 1 < starts.size() ? starts[j + 1] : R;
    samples.push_back(nadic_point_between(starts[j], right, n));
    if (is_nadic(starts[j], n)) samples.push_back(starts[j]);
  }
  for (const auto& x : samples) {
    if (!is_nadic(m.lift(x), n)) carries = false;
  }
  rep.conditions[4] = carries;

  bool all = std::all_of(rep.conditions.begin(), rep.conditions.end(),
                         [](bool b) { return b; });
  if (!all) return rep;
  rep.tags.insert(Family::Tbar_nr);
  if (m.degree() == 1) {
    rep.tags.insert(Family::T_nr);
    // Preserving p_r(Delta_n) means every piece shifts phi_n into the
    // subgroup of Z_{n-1} generated by r.
    const long a = std::gcd(m.circumference(), n - 1);
    bool bt = true;
    for (const auto& x : samples) {
      if (residue_shift(x, m.lift(x), n, n - 1) % a != 0) bt = false;
    }
    if (bt) rep.tags.insert(Family::BT_nr);
  }
  return rep;
}

MembershipReport classify(const PLLineMap& m, long n) {
  MembershipReport rep;
  const auto& bps = m.breakpoints();
  const auto& pcs = m.pieces();

  rep.conditions[0] = true;
  rep.conditions[1] = !m.reversing();
  rep.conditions[2] = std::all_of(pcs.begin(), pcs.end(), [&](const AffinePiece& p) {
    return is_power_slope(p.slope, n);
  });
  rep.conditions[3] = std::all_of(bps.begin(), bps.end(),
                                  [&](const Rational& b) { return is_nadic(b, n); });
  std::vector<Rational> samples;
  if (bps.empty()) {
    samples.emplace_back(0);
  } else {
    samples.push_back(Rational(bps.front().floor()) - Rational(1));
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
      samples.push_back(nadic_point_between(bps[i], bps[i + 1], n));
    }
    samples.push_back(Rational(bps.back().floor()) + Rational(1));
    for (const auto& b : bps) {
      if (is_nadic(b, n)) samples.push_back(b);
    }
  }
  rep.conditions[4] = std::all_of(samples.begin(), samples.end(), [&](const Rational& x) {
    return is_nadic(m.evaluate(x), n);
  });

  bool all = std::all_of(rep.conditions.begin(), rep.conditions.end(),
                         [](bool b) { return b; });
  if (!all) return rep;
  rep.tags.insert(Family::PL_n);
  rep.d_n_value = d_n(m, n);
  if (bps.empty()) rep.tags.insert(Family::Aff_n);

  auto translation = [&](const AffinePiece& p) -> std::optional<long> {
    if (p.slope != Rational(1)) return std::nullopt;
    Rational k = p.intercept / Rational(n - 1);
    if (!k.is_integer()) return std::nullopt;
    return to_int64(k.num());
  };
  auto i = translation(m.right_end());
  auto j = translation(m.left_end());
  if (i && j) {
    rep.tags.insert(Family::F_n);
    rep.end_translations = std::make_pair(*i, *j);
    if (*i == 0 && *j == 0) rep.tags.insert(Family::BPL_n);
  }
  return rep;
}

Orbit orbit(const PLCircleMap& m, const Rational& x, std::int64_t max_steps) {
  if (max_steps < 1) bad_map("max_steps must be positive");
  std::vector<Rational> seq{x.mod(Rational(m.circumference()))};
  std::unordered_map<Rational, std::size_t> seen{{seq.front(), 0}};
  for (std::int64_t step = 0; step < max_steps; ++step) {
    Rational y = m.evaluate(seq.back());
    auto it = seen.find(y);
    if (it != seen.end()) {
      Orbit o;
      o.pre_period.assign(seq.begin(), seq.begin() + static_cast<long>(it->second));
      o.cycle.assign(seq.begin() + static_cast<long>(it->second), seq.end());
      return o;
    }
    seen.emplace(y, seq.size());
    seq.push_back(std::move(y));
  }
  throw Error(ErrorKind::BudgetExceeded,
              "no repetition in the orbit of " + x.str() + " within " +
                  std::to_string(max_steps) + " steps");
}

}  // namespace chameleon
