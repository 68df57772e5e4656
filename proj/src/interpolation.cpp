#include "chameleon/interpolation.hpp"

#include <algorithm>

#include "chameleon/error.hpp"

namespace chameleon {

namespace {

std::size_t interval_piece(const IntervalMap& m, const Rational& x) {
  auto it = std::upper_bound(m.cuts.begin() + 1, m.cuts.end() - 1, x);
  return static_cast<std::size_t>(it - (m.cuts.begin() + 1));
}

void require_delta(long n, const Rational& x) {
  auto a = to_nadic(x, n);
  if (!a || phi_n(*a) != 0) {
    throw Error(ErrorKind::NotInDelta, x.str() + " is not in Delta_" + std::to_string(n));
  }
}

void require_increasing(const std::vector<Rational>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i - 1] < v[i])) {
      throw Error(ErrorKind::NotIncreasing, "sequence not strictly increasing at " +
                                                v[i].str());
    }
  }
}

}  // namespace

Rational IntervalMap::evaluate(const Rational& x) const {
  return pieces[interval_piece(*this, x)].at(x);
}

std::vector<Rational> power_pieces(long n, const Rational& len) {
  auto a = to_nadic(len, n);
  if (!a || len.sign() <= 0) {
    throw Error(ErrorKind::PreconditionFailed,
                "length " + len.str() + " is not a positive n-adic");
  }
  std::vector<long> digits;
  BigInt m = a->mantissa();
  while (m > 0) {
    BigInt d = m % n;
    digits.push_back(d.get_si());
    m /= n;
  }
  std::vector<Rational> out;
  for (long j = static_cast<long>(digits.size()) - 1; j >= 0; --j) {
    Rational piece = Rational::power(n, j - a->exponent());
    for (long c = 0; c < digits[static_cast<std::size_t>(j)]; ++c) out.push_back(piece);
  }
  return out;
}

std::pair<std::vector<Rational>, std::vector<Rational>> matched_subdivision(
    long n, const Rational& len_a, const Rational& len_b) {
  auto A = power_pieces(n, len_a);
  auto B = power_pieces(n, len_b);
  if (phi_n(len_a, n) != phi_n(len_b, n)) {
    throw Error(ErrorKind::NotInDelta, "lengths " + len_a.str() + " and " +
                                           len_b.str() + " differ modulo n-1");
  }
  while (A.size() != B.size()) {
    auto& fewer = A.size() < B.size() ? A : B;
    auto it = std::max_element(fewer.begin(), fewer.end());
    Rational part = *it / Rational(n);
    it = fewer.erase(it);
    fewer.insert(it, static_cast<std::size_t>(n), part);
  }
  return {std::move(A), std::move(B)};
}

IntervalMap interpolate_interval(long n, const std::vector<Rational>& xs,
                                 const std::vector<Rational>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw Error(ErrorKind::PreconditionFailed, "need matching sequences of length >= 2");
  }
  require_increasing(xs);
  require_increasing(ys);
  IntervalMap m;
  m.cuts.push_back(xs.front());
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    auto [dom, img] = matched_subdivision(n, xs[i + 1] - xs[i], ys[i + 1] - ys[i]);
    Rational x = xs[i], y = ys[i];
    for (std::size_t k = 0; k < dom.size(); ++k) {
      Rational slope = img[k] / dom[k];
      m.pieces.push_back({slope, y - slope * x});
      x += dom[k];
      y += img[k];
      m.cuts.push_back(x);
    }
  }
  return m;
}

PLLineMap interpolate_line(long n, const std::vector<Rational>& xs,
                           const std::vector<Rational>& ys) {
  if (xs.empty() || xs.size() != ys.size()) {
    throw Error(ErrorKind::PreconditionFailed, "need matching non-empty sequences");
  }
  for (const auto& x : xs) require_delta(n, x);
  for (const auto& y : ys) require_delta(n, y);
  require_increasing(xs);
  require_increasing(ys);

  const Rational pad(n - 1);
  Rational lo = std::min(xs.front(), ys.front()) - pad;
  Rational hi = std::max(xs.back(), ys.back()) + pad;
  std::vector<Rational> X{lo}, Y{lo};
  X.insert(X.end(), xs.begin(), xs.end());
  Y.insert(Y.end(), ys.begin(), ys.end());
  X.push_back(hi);
  Y.push_back(hi);

  IntervalMap core = interpolate_interval(n, X, Y);
  std::vector<AffinePiece> pieces{{Rational(1), Rational(0)}};
  pieces.insert(pieces.end(), core.pieces.begin(), core.pieces.end());
  pieces.push_back({Rational(1), Rational(0)});
  return PLLineMap::from_normal_form(false, core.cuts, pieces);
}

PLLineMap match_on_interval(long n, const PLLineMap& f, const Rational& a,
                            const Rational& b) {
  if (!(a < b)) throw Error(ErrorKind::PreconditionFailed, "need a < b");
  if (f.reversing()) {
    throw Error(ErrorKind::PreconditionFailed, "map must preserve orientation");
  }
  long d = d_n(f, n);
  if (d != 0) {
    throw Error(ErrorKind::NonzeroDn, "d_n(f) = " + std::to_string(d));
  }
  const Rational step(n - 1);
  Rational a1 = Rational((a / step).floor()) * step;
  Rational b1 = Rational((b / step).ceil()) * step;
  PLLineMap g1 = interpolate_line(n, {a1, b1}, {f(a1), f(b1)});

  std::vector<Rational> cuts{a1, b1};
  for (const auto& c : g1.breakpoints()) {
    if (c < a1 || b1 < c) cuts.push_back(c);
  }
  for (const auto& c : f.breakpoints()) {
    if (a1 < c && c < b1) cuts.push_back(c);
  }
  return PLLineMap::from_evaluator(std::move(cuts), [&](const Rational& x) {
    const PLLineMap& use = (x < a1 || b1 < x) ? g1 : f;
    return LocalAffine{use(x), use.right_slope(x)};
  });
}

PLCircleMap circle_map_from_interval(long r, const IntervalMap& m) {
  const Rational R(r);
  const Rational x0 = m.cuts.front();
  if (m.cuts.back() - x0 != R ||
      m.evaluate(m.cuts.back()) - m.pieces.front().at(x0) != R) {
    throw Error(ErrorKind::PreconditionFailed, "interval map does not span the circle");
  }
  return PLCircleMap::from_evaluator(r, m.cuts, [&](const Rational& x) {
    Rational u = x0 + (x - x0).mod(R);
    const AffinePiece& p = m.pieces[interval_piece(m, u)];
    return LocalAffine{p.at(u), p.slope};
  });
}

PLCircleMap interpolate_circle(long n, long r, const std::vector<Rational>& points,
                               const std::vector<Arc>& targets) {
  if (points.empty() || points.size() != targets.size()) {
    throw Error(ErrorKind::PreconditionFailed, "need one target per point");
  }
  const Rational R(r);
  const std::size_t k = points.size();

  // Lift counterclockwise; a second trip around means the order is wrong.
  std::vector<Rational> U(k);
  U[0] = points[0].mod(R);
  for (std::size_t i = 1; i < k; ++i) {
    U[i] = U[i - 1] + (points[i] - U[i - 1]).mod(R);
    if (U[i] == U[i - 1]) U[i] += R;
  }
  if (!(U[k - 1] < U[0] + R)) {
    throw Error(ErrorKind::BadCyclicOrder, "points are not in counterclockwise order");
  }
  std::vector<Rational> T(k), E(k);
  for (std::size_t i = 0; i < k; ++i) {
    Rational len = (targets[i].hi - targets[i].lo).mod(R);
    if (len.is_zero()) {
      throw Error(ErrorKind::PreconditionFailed, "target arc has empty interior");
    }
    Rational lo = targets[i].lo.mod(R);
    if (i == 0) {
      T[i] = lo;
    } else {
      T[i] = E[i - 1] + (lo - E[i - 1]).mod(R);
      if (T[i] == E[i - 1]) T[i] += R;
    }
    E[i] = T[i] + len;
  }
  if (!(E[k - 1] < T[0] + R)) {
    throw Error(ErrorKind::BadCyclicOrder,
                "targets overlap or are not in counterclockwise order");
  }

  bool inside = true;
  for (std::size_t i = 0; i < k; ++i) {
    Rational off = (U[i] - T[i]).mod(R);
    if (off > E[i] - T[i]) inside = false;
  }
  if (inside) return PLCircleMap::identity(r);

  // Grid (n-1) n^-e Z lies in Delta_n; refine until every point has its own
  // grid cell and every target holds two grid points in its interior.
  for (long e = 0; e < 4096; ++e) {
    const Rational delta = Rational(n - 1) / Rational::power(n, e);
    std::vector<Rational> xs, ys;
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i) {
      Rational a = Rational((U[i] / delta).floor()) * delta;
      Rational c = Rational(BigInt((T[i] / delta).floor() + 1)) * delta;
      if (!(c + delta < E[i])) ok = false;
      if (!xs.empty() && !(xs.back() < a)) ok = false;
      xs.push_back(a);
      xs.push_back(a + delta);
      ys.push_back(c);
      ys.push_back(c + delta);
    }
    if (!ok || !(xs.back() < xs.front() + R)) continue;
    xs.push_back(xs.front() + R);
    ys.push_back(ys.front() + R);
    return circle_map_from_interval(r, interpolate_interval(n, xs, ys));
  }
  throw Error(ErrorKind::BudgetExceeded, "no grid fine enough to separate the points");
}

}  // namespace chameleon
