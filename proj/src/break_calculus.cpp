#include "chameleon/break_calculus.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <unordered_map>

namespace chameleon {

namespace {

constexpr std::int64_t kOrbitBudget = std::int64_t{1} << 16;

// Whether g carries non-n-adic points to non-n-adic points, so their orbits
// never touch a break.
bool preserves_nadics(const PLCircleMap& g, long n) {
  for (const auto& b : g.breakpoints()) {
    if (!is_nadic(b, n)) return false;
  }
  for (const auto& piece : g.segment_pieces()) {
    if (!exact_log(piece.slope, n) || !is_nadic(piece.intercept, n)) return false;
  }
  return true;
}

std::string join(const std::vector<Rational>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + xs[i].str();
  return s;
}

}  // namespace

long sigma(const PLCircleMap& g, const Rational& x) {
  const long n = g.degree();
  const Rational y = x.mod(Rational(g.circumference()));
  if (!is_nadic(y, n) && preserves_nadics(g, n)) return 0;
  Orbit o = orbit(g, y, kOrbitBudget);
  std::vector<long> cycle_breaks;
  bool diverges = false;
  for (const auto& c : o.cycle) {
    cycle_breaks.push_back(break_value(g, c, n));
    if (cycle_breaks.back() != 0) diverges = true;
  }
  if (diverges) {
    const bool fixed = o.cycle.size() == 1;
    throw DivergenceError(
        fixed ? ErrorKind::DivergentFixedPoint : ErrorKind::DivergentCycle,
        "orbit of " + y.str() + " ends on " + (fixed ? "fixed point " : "cycle ") +
            join(o.cycle) + " with a nonzero break",
        o.cycle, cycle_breaks);
  }
  long total = 0;
  for (const auto& p : o.pre_period) total += break_value(g, p, n);
  return total;
}

std::vector<long> SigmaTable::values() const {
  std::vector<long> out;
  for (const auto& e : entries) out.push_back(e.value);
  return out;
}

const SigmaEntry& SigmaTable::at_index(std::int64_t i) const {
  auto it = std::find_if(entries.begin(), entries.end(),
                         [&](const SigmaEntry& e) { return e.vertex.index == i; });
  if (it == entries.end()) {
    throw Error(ErrorKind::PreconditionFailed,
                "no level-" + std::to_string(stable_level) + " entry " + std::to_string(i));
  }
  return *it;
}

SigmaTable sigma_table(const MarkovMap& mm) {
  const long n = mm.base();
  const auto& P = mm.partition();
  const PLCircleMap& g = mm.g();
  SigmaTable t{n, mm.stable_level(), {}};
  for (long i = 0; i < n - 1; ++i) {
    const Rational& x = P.endpoint(i * P.size() / (n - 1));
    long b = break_value(g, x, n);
    if (b != 0) {
      throw DivergenceError(ErrorKind::DivergentFixedPoint,
                            "break " + std::to_string(b) + " at fixed point " + x.str(),
                            {x}, {b});
    }
  }
  if (t.stable_level == 0) return t;
  std::int64_t count = n - 1;
  for (long k = 0; k < t.stable_level; ++k) count *= n;
  for (std::int64_t i = 1; i < count; ++i) {
    if (i % n == 0) continue;
    VertexRef v{i, t.stable_level};
    Rational x = mm.vertex_value(v);
    t.entries.push_back({v, x, sigma(g, x)});
  }
  return t;
}

CoboundaryCheck coboundary_check(const PLCircleMap& g, const std::vector<Rational>& xs) {
  const long n = g.degree();
  for (const auto& x : xs) {
    if (break_value(g, x, n) != sigma(g, x) - sigma(g, g(x))) return {false, x};
  }
  return {};
}

std::vector<Rational> vertices_to_level(const MarkovMap& mm, long k) {
  if (mm.partition().power_exponent()) return mm.level_table(k).endpoints;
  std::vector<Rational> out;
  const std::int64_t count = mm.derived_count(k);
  for (std::int64_t j = 0; j < count; ++j) out.push_back(mm.derived_vertex(k, j));
  return out;
}

std::vector<StarViolation> star_check(const MarkovMap& mm, long level_bound) {
  const PLCircleMap& g = mm.g();
  const long n = mm.base();
  struct Path {
    std::vector<Rational> points;  // g^k(x) for k = 1..len
    std::vector<long> acc;         // (g^k)^b(x)
    std::unordered_map<Rational, std::size_t> first;
  };
  const auto verts = vertices_to_level(mm, level_bound);
  std::vector<Path> paths;
  for (const auto& x : verts) {
    Orbit o = orbit(g, x, kOrbitBudget);
    std::vector<Rational> seq = o.pre_period;
    seq.insert(seq.end(), o.cycle.begin(), o.cycle.end());
    Path path;
    long acc = 0;
    for (std::size_t k = 0; k < seq.size(); ++k) {
      acc += break_value(g, seq[k], n);
      const Rational& next = k + 1 < seq.size() ? seq[k + 1] : o.cycle.front();
      path.points.push_back(next);
      path.acc.push_back(acc);
      path.first.emplace(next, k);
    }
    paths.push_back(std::move(path));
  }
  std::vector<StarViolation> out;
  for (std::size_t a = 0; a < paths.size(); ++a) {
    for (std::size_t b = a + 1; b < paths.size(); ++b) {
      const Path& X = paths[a];
      const Path& Y = paths[b];
      for (std::size_t q = 0; q < Y.points.size(); ++q) {
        auto it = X.first.find(Y.points[q]);
        if (it == X.first.end()) continue;
        const std::size_t p = it->second;
        if (X.acc[p] != Y.acc[q]) {
          out.push_back({verts[a], verts[b], Y.points[q], static_cast<long>(p + 1),
                         static_cast<long>(q + 1), X.acc[p], Y.acc[q]});
        }
        break;
      }
    }
  }
  return out;
}

namespace {

struct BreakData {
  std::vector<SigmaEntry> generic;
  std::vector<Rational> heights;
  std::vector<long> b;
  long total = 0;
};

// Power form: generic class is the level-K table, b lives on levels < K.
BreakData power_form_breaks(const MarkovMap& mm) {
  const PLCircleMap& g = mm.g();
  BreakData d;
  const SigmaTable table = sigma_table(mm);
  d.generic = table.entries;
  const long K = table.stable_level;
  const long s0 = d.generic.empty() ? 0 : d.generic.front().value;
  d.heights.push_back(Rational(0));
  d.b.push_back(0);
  if (K >= 1) {
    d.total = s0 - sigma(g, Rational(0));
    for (std::int64_t i = 1; i < (std::int64_t{1} << (K - 1)); ++i) {
      Rational x = mm.vertex_value({i, K - 1});
      long bx = s0 - sigma(g, x);
      d.total += bx;
      if (bx != 0) {
        d.heights.push_back(x);
        d.b.push_back(bx);
      }
    }
  }
  return d;
}

// Otherwise every break of g sits on a partition endpoint and g permutes the
// endpoints by j -> 2j mod p. Sigma may fail to converge on a cycle whose
// breaks sum to zero; it is then known up to one constant per cycle. The
// constants are pinned by the generic class (the x_{j mod p}, j odd, images
// of the new depth-1 vertices) and, for one leftover cycle, by the zero sum.
BreakData endpoint_breaks(const MarkovMap& mm) {
  const PLCircleMap& g = mm.g();
  const auto& P = mm.partition();
  const std::size_t p = static_cast<std::size_t>(P.size());
  auto next = [p](std::size_t j) { return (2 * j) % p; };
  std::vector<long> brk(p);
  for (std::size_t j = 0; j < p; ++j) brk[j] = break_value(g, P.endpoint(static_cast<std::int64_t>(j)), 2);

  // Label cycles; offset[j] = Sigma(x_j) - t[cycle[j]].
  std::vector<long> cycle(p, -1), offset(p, 0);
  long cycles = 0;
  for (std::size_t start = 0; start < p; ++start) {
    std::vector<std::size_t> path;
    std::vector<long> seen_at(p, -1);
    std::size_t j = start;
    while (cycle[j] < 0 && seen_at[j] < 0) {
      seen_at[j] = static_cast<long>(path.size());
      path.push_back(j);
      j = next(j);
    }
    std::size_t stop = path.size();
    if (cycle[j] < 0) {
      stop = static_cast<std::size_t>(seen_at[j]);
      std::vector<Rational> pts;
      std::vector<long> vals;
      long sum = 0;
      for (std::size_t i = stop; i < path.size(); ++i) {
        pts.push_back(P.endpoint(static_cast<std::int64_t>(path[i])));
        vals.push_back(brk[path[i]]);
        sum += brk[path[i]];
      }
      if (sum != 0) {
        throw DivergenceError(pts.size() == 1 ? ErrorKind::DivergentFixedPoint
                                              : ErrorKind::DivergentCycle,
                              "breaks on the cycle of " + pts.front().str() + " sum to " +
                                  std::to_string(sum),
                              pts, vals);
      }
      long kappa = 0;
      for (std::size_t i = stop; i < path.size(); ++i) {
        cycle[path[i]] = cycles;
        offset[path[i]] = kappa;
        kappa -= brk[path[i]];
      }
      ++cycles;
    }
    for (std::size_t i = stop; i-- > 0;) {
      const std::size_t a = path[i], b = next(a);
      cycle[a] = cycle[b];
      offset[a] = brk[a] + offset[b];
    }
  }

  std::vector<bool> generic(p, false);
  for (std::size_t j = 1; j < 2 * p; j += 2) generic[j % p] = true;
  std::vector<std::optional<long>> t(static_cast<std::size_t>(cycles));
  BreakData d;
  for (std::size_t j = 0; j < p; ++j) {
    if (!generic[j]) continue;
    auto& tc = t[static_cast<std::size_t>(cycle[j])];
    if (!tc) tc = -offset[j];
    d.generic.push_back({{static_cast<std::int64_t>(j), 0}, P.endpoint(static_cast<std::int64_t>(j)),
                         offset[j] + *tc});
  }
  for (const auto& e : d.generic) {
    if (e.value != 0) return d;
  }

  std::optional<long> free_cycle;
  long fixed_sum = 0, free_count = 0;
  for (std::size_t j = 0; j < p; ++j) {
    if (generic[j]) continue;
    const auto c = static_cast<std::size_t>(cycle[j]);
    if (t[c]) {
      fixed_sum -= offset[j] + *t[c];
      continue;
    }
    if (free_cycle && *free_cycle != cycle[j]) {
      throw Error(ErrorKind::ReconstructionMismatch,
                  "break function undetermined on several cycles");
    }
    free_cycle = cycle[j];
    fixed_sum -= offset[j];
    ++free_count;
  }
  if (free_cycle) {
    if (fixed_sum % free_count != 0) {
      throw Error(ErrorKind::ReconstructionMismatch, "no integral constant balances the breaks");
    }
    t[static_cast<std::size_t>(*free_cycle)] = fixed_sum / free_count;
  }

  d.heights.push_back(Rational(0));
  d.b.push_back(0);
  for (std::size_t j = 0; j < p; ++j) {
    if (generic[j]) continue;
    long bx = -(offset[j] + *t[static_cast<std::size_t>(cycle[j])]);
    d.total += bx;
    if (j > 0 && bx != 0) {
      d.heights.push_back(P.endpoint(static_cast<std::int64_t>(j)));
      d.b.push_back(bx);
    }
  }
  return d;
}

}  // namespace

CriterionVerdict pl_criterion(const MarkovMap& mm) {
  if (mm.base() != 2) throw Error(ErrorKind::WrongBase, "the criterion is decided for n = 2");
  const PLCircleMap& g = mm.g();
  const bool power_form = mm.partition().power_exponent().has_value();
  const BreakData data = power_form ? power_form_breaks(mm) : endpoint_breaks(mm);
  CriterionVerdict v;
  for (const auto& e : data.generic) {
    if (e.value != data.generic.front().value) {
      v.witness = std::make_pair(data.generic.front(), e);
      return v;
    }
  }
  if (data.total != 0) {
    throw Error(ErrorKind::ReconstructionMismatch,
                "break function sums to " + std::to_string(data.total));
  }

  const auto& heights = data.heights;
  std::vector<long> B(heights.size(), 0);
  std::vector<Rational> widths;
  Rational m(0);
  for (std::size_t j = 0; j < heights.size(); ++j) {
    if (j > 0) B[j] = B[j - 1] + data.b[j];
    const Rational top = j + 1 < heights.size() ? heights[j + 1] : Rational(1);
    widths.push_back((top - heights[j]) * Rational::power(2, -B[j]));
    m += widths.back();
  }
  if (power_form && !exact_log(m, 2)) {
    throw Error(ErrorKind::SlopeNotPowerOfTwo, "initial slope " + m.str());
  }
  std::vector<Rational> cuts;
  std::vector<AffinePiece> pieces;
  Rational d(0);
  for (std::size_t j = 0; j < heights.size(); ++j) {
    Rational s = m * Rational::power(2, B[j]);
    cuts.push_back(d);
    pieces.push_back({s, heights[j] - s * d});
    d += widths[j] / m;
  }
  PLCircleMap h_bar = PLCircleMap::from_segments(1, std::move(cuts), std::move(pieces));
  if (compose(h_bar, compose(PLCircleMap::nu(2), invert(h_bar))) != g) {
    throw Error(ErrorKind::ReconstructionMismatch, "rebuilt conjugator does not conjugate nu_2 to g");
  }
  v.is_pl = true;
  v.h_bar = std::move(h_bar);
  v.initial_slope = m;
  return v;
}

std::vector<ZetaString> zeta_strings(const std::vector<long>& values, long zeta) {
  const std::size_t len = values.size();
  if (len == 0 || (len & (len - 1)) != 0) {
    throw Error(ErrorKind::BadLength, std::to_string(len) + " values is not 2^(K-1)");
  }
  const long K = std::countr_zero(len) + 1;
  if (zeta < 1 || zeta > K - 1) {
    throw Error(ErrorKind::BadLength, "zeta " + std::to_string(zeta) +
                                          " outside [1, " + std::to_string(K - 1) + "]");
  }
  const std::size_t count = std::size_t{1} << zeta;
  const std::size_t width = len / count;
  std::vector<ZetaString> out;
  for (std::size_t pre = 0; pre < count; ++pre) {
    ZetaString z;
    z.prefix = pre;
    z.odd = (pre & 1) != 0;
    z.values.assign(values.begin() + static_cast<std::ptrdiff_t>(pre * width),
                    values.begin() + static_cast<std::ptrdiff_t>((pre + 1) * width));
    out.push_back(std::move(z));
  }
  return out;
}

std::optional<long> zeta_schedule_discrepancy(const std::vector<long>& values) {
  const std::size_t len = values.size();
  if (len == 0 || (len & (len - 1)) != 0) {
    throw Error(ErrorKind::BadLength, std::to_string(len) + " values is not 2^(K-1)");
  }
  const long K = std::countr_zero(len) + 1;
  // Prefixes 0...00 and 0...01 are the first two strings.
  for (long zeta = 1; zeta <= K - 1; ++zeta) {
    const std::size_t width = len >> zeta;
    if (!std::equal(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(width),
                    values.begin() + static_cast<std::ptrdiff_t>(width))) {
      return zeta;
    }
  }
  return std::nullopt;
}

std::optional<SigmaDiscrepancy> find_sigma_discrepancy(const MarkovMap& mm,
                                                       const SigmaTable& table,
                                                       const VertexRef& j,
                                                       const VertexRef& k, long p) {
  if (mm.base() != 2) throw Error(ErrorKind::WrongBase, "discrepancy search needs n = 2");
  const long K = table.stable_level;
  for (const VertexRef* v : {&j, &k}) {
    if (natural_level(*v, 2) != v->level || v->level < K) {
      throw Error(ErrorKind::PreconditionFailed,
                  "vertex (" + std::to_string(v->index) + ", " + std::to_string(v->level) +
                      ") must sit at its natural level, at least K");
    }
  }
  if (p < 1) throw Error(ErrorKind::PreconditionFailed, "p must be positive");
  auto lookup = [&](const Rational& w) {
    NAdic a = *to_nadic(w, 2);
    NAdic om = omega_K(a, K);
    Rational idx = om.value() * Rational::power(2, K);
    return table.at_index(to_int64(idx.num())).value;
  };
  const std::int64_t top = std::int64_t{1} << K;
  for (std::int64_t i = 1; i < top; ++i) {
    Rational w1 = Rational(j.index) / Rational::power(2, j.level) +
                  Rational(i) / Rational::power(2, j.level + K);
    Rational w2 = Rational(k.index) / Rational::power(2, k.level) +
                  Rational(i) / Rational::power(2, k.level + K + p);
    if (lookup(w1) != lookup(w2)) {
      return SigmaDiscrepancy{i, mm.vertex_value({top * j.index + i, j.level + K})};
    }
  }
  return std::nullopt;
}

AffineMarkovPartition partition_from_conjugator(const PLCircleMap& h) {
  if (h.circumference() != 1 || h.degree() != 1 || !h(Rational(0)).is_zero()) {
    throw Error(ErrorKind::PreconditionFailed, "need a circle homeomorphism of S_1 fixing 0");
  }
  long m = 1;
  for (const auto& b : h.breakpoints()) {
    auto a = to_nadic(b, 2);
    if (!a) throw Error(ErrorKind::PreconditionFailed, "breakpoint " + b.str() + " not dyadic");
    m = std::max(m, a->exponent() + 1);
  }
  if (m > 20) throw Error(ErrorKind::BudgetExceeded, "conjugator too fine");
  const Rational base = h.lift(Rational(0));
  const std::int64_t count = std::int64_t{1} << m;
  std::vector<Rational> lens;
  BigInt den(1);
  Rational prev(0);
  for (std::int64_t i = 1; i <= count; ++i) {
    Rational y = h.lift(Rational(i) / Rational(count)) - base;
    lens.push_back(y - prev);
    prev = y;
    den = lcm(den, lens.back().den());
  }
  std::vector<long> out;
  for (const auto& L : lens) out.push_back(to_int64((L * Rational(den)).num()));
  return AffineMarkovPartition(2, std::move(out));
}

}  // namespace chameleon
