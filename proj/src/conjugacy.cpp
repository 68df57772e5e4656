#include "chameleon/conjugacy.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <limits>

namespace chameleon {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// Calls visit(depth, table) for derived P tables 0..depth, building each
// from its parent and keeping only one level alive.
void for_each_level(const MarkovMap& mm, long depth,
                    const std::function<bool(long, const std::vector<Rational>&)>& visit) {
  const auto& P = mm.partition();
  const long n = mm.base();
  std::vector<Rational> prev;
  for (std::int64_t i = 0; i < P.size(); ++i) prev.push_back(P.endpoint(i));
  if (!visit(0, prev)) return;
  std::vector<Rational> slope, origin;
  for (std::int64_t i = 0; i < P.size(); ++i) {
    slope.push_back(P.slope(i));
    origin.push_back(P.lifted_endpoint(n * i));
  }
  std::int64_t per_interval = 1;
  for (long d = 1; d <= depth; ++d) {
    per_interval *= n;
    const auto block = static_cast<std::int64_t>(prev.size());
    std::vector<Rational> cur;
    cur.reserve(static_cast<std::size_t>(block * n));
    for (std::int64_t j = 0; j < block * n; ++j) {
      const auto ip = static_cast<std::size_t>(j / per_interval);
      Rational y = prev[static_cast<std::size_t>(j % block)] +
                   Rational(n - 1) * Rational(j / block);
      cur.push_back(P.endpoint(static_cast<std::int64_t>(ip)) +
                    (y - origin[ip]) / slope[ip]);
    }
    prev = std::move(cur);
    if (!visit(d, prev)) return;
  }
}

}  // namespace

long default_memo_depth() {
  const char* env = std::getenv("CHAMELEON_MAX_DEPTH");
  if (env == nullptr || *env == '\0') return kDefaultMemoDepth;
  long v = 0;
  const char* end = env + std::strlen(env);
  auto [ptr, ec] = std::from_chars(env, end, v);
  if (ec != std::errc() || ptr != end || v < 0) {
    throw Error(ErrorKind::ParseError,
                std::string("CHAMELEON_MAX_DEPTH must be a non-negative integer, got '") +
                    env + "'");
  }
  return v;
}

std::string to_string(DyadicCounterexample::Detector d) {
  return d == DyadicCounterexample::Detector::Vertex ? "vertex" : "periodic";
}

Conjugator::Conjugator(MarkovMap mm, long memo_depth)
    : mm_(std::move(mm)), memo_depth_(memo_depth) {
  if (memo_depth < 0) throw Error(ErrorKind::PreconditionFailed, "negative memo depth");
}

Rational Conjugator::h_eval(const Rational& q) const {
  const long n = mm_.base();
  const std::int64_t p = mm_.partition().size();
  if (p % (n - 1) != 0) {
    throw Error(ErrorKind::FixedPointsNotVertices,
                std::to_string(p) + " intervals is not a multiple of n-1");
  }
  const Rational u = q.mod(Rational(n - 1));
  for (long d = 0; d <= memo_depth_; ++d) {
    Rational j = u * Rational(mm_.derived_count(d)) / Rational(n - 1);
    if (j.is_integer()) return mm_.derived_vertex(d, to_int64(j.num()));
  }
  if (is_nadic(u, n)) {
    throw Error(ErrorKind::BudgetExceeded,
                q.str() + " needs more than " + std::to_string(memo_depth_) +
                    " derivations");
  }
  throw Error(ErrorKind::NotAVertex, q.str() + " is not a derived Q vertex");
}

Rational Conjugator::h_inverse_eval(const Rational& x) const {
  const long n = mm_.base();
  const Rational u = x.mod(Rational(n - 1));
  for (long d = 0; d <= memo_depth_; ++d) {
    std::int64_t lo = 0, hi = mm_.derived_count(d) - 1;
    while (lo <= hi) {
      std::int64_t mid = lo + (hi - lo) / 2;
      Rational v = mm_.derived_vertex(d, mid);
      if (v == u) return mm_.q_vertex(d, mid);
      if (v < u) {
        lo = mid + 1;
      } else {
        hi = mid - 1;
      }
    }
  }
  throw Error(ErrorKind::NotAVertex,
              x.str() + " is not a vertex to depth " + std::to_string(memo_depth_));
}

Enclosure Conjugator::h_eval_enclosure(const Rational& q, const Rational& width) const {
  if (width.sign() <= 0) throw Error(ErrorKind::PreconditionFailed, "width must be positive");
  const long n = mm_.base();
  const Rational u = q.mod(Rational(n - 1));
  std::optional<Enclosure> best;
  for (long d = 0; d <= memo_depth_; ++d) {
    Rational t = u * Rational(mm_.derived_count(d)) / Rational(n - 1);
    std::int64_t j = to_int64(t.floor());
    if (t.is_integer()) {
      Rational v = mm_.derived_vertex(d, j);
      return {v, v};
    }
    best = Enclosure{mm_.derived_vertex(d, j), mm_.derived_vertex(d, j + 1)};
    if (best->width() <= width) return *best;
  }
  throw EnclosureBudgetExceeded("enclosure of h(" + q.str() + ") wider than " +
                                    width.str() + " at depth " +
                                    std::to_string(memo_depth_),
                                *best);
}

std::vector<std::vector<Rational>> Conjugator::level_tables(long depth) const {
  std::vector<std::vector<Rational>> out;
  for_each_level(mm_, depth, [&](long, const std::vector<Rational>& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

ConjugacyCheck check_level_tables(const PLCircleMap& g,
                                  const std::vector<std::vector<Rational>>& tables) {
  ConjugacyCheck out;
  out.depth = static_cast<long>(tables.size()) - 1;
  if (tables.empty()) return out;
  const long n = g.degree();
  for (std::size_t d = 0; d < tables.size(); ++d) {
    const auto& cur = tables[d];
    const auto& parent = d == 0 ? tables[0] : tables[d - 1];
    const auto size = static_cast<std::int64_t>(parent.size());
    for (std::size_t j = 0; j < cur.size(); ++j) {
      const auto sj = static_cast<std::int64_t>(j);
      const std::int64_t target = d == 0 ? floor_mod(n * sj, size) : sj % size;
      Rational image = g(cur[j]);
      const Rational& expected = parent[static_cast<std::size_t>(target)];
      if (image != expected) {
        out.holds = false;
        out.witness = TableWitness{static_cast<long>(d), sj, cur[j], image, expected};
        return out;
      }
    }
  }
  return out;
}

ConjugacyCheck Conjugator::check_conjugacy(long depth) const {
  if (depth < 1) throw Error(ErrorKind::PreconditionFailed, "depth must be >= 1");
  return check_level_tables(mm_.g(), level_tables(depth));
}

DyadicImageStatus Conjugator::dyadic_image_status(long depth) const {
  const long n = mm_.base();
  DyadicImageStatus st;
  st.depth = depth;
  for_each_level(mm_, depth, [&](long d, const std::vector<Rational>& t) {
    for (std::size_t j = 0; j < t.size(); ++j) {
      const bool p_nadic = is_nadic(t[j], n);
      if (!p_nadic && st.subset_holds) {
        st.subset_holds = false;
        st.subset_witness = t[j];
      }
      if (p_nadic && !st.counterexample) {
        Rational q = mm_.q_vertex(d, static_cast<std::int64_t>(j));
        if (!is_nadic(q, n)) {
          st.counterexample = DyadicCounterexample{
              DyadicCounterexample::Detector::Vertex, t[j], q, std::nullopt};
        }
      }
    }
    return true;
  });
  if (st.counterexample) return st;

  // h pairs the least period q points of nu_n with those of g, and nu_n has
  // no n-adic ones beyond its fixed points.
  const long top = std::max<long>(2, std::min<long>(depth, 8));
  const PLCircleMap nu = PLCircleMap::nu(n);
  for (long q = 2; q <= top; ++q) {
    auto count_nadic = [&](const std::vector<Rational>& pts) {
      return std::count_if(pts.begin(), pts.end(),
                           [&](const Rational& x) { return is_nadic(x, n); });
    };
    auto gp = least_period_points(mm_.g(), static_cast<int>(q));
    auto np = least_period_points(nu, static_cast<int>(q));
    if (count_nadic(gp) > count_nadic(np)) {
      auto it = std::find_if(gp.begin(), gp.end(),
                             [&](const Rational& x) { return is_nadic(x, n); });
      st.counterexample = DyadicCounterexample{
          DyadicCounterexample::Detector::Periodic, *it, std::nullopt, q};
      break;
    }
  }
  return st;
}

long enclosure_step_bound(const MarkovMap& mm, const Rational& width) {
  if (width.sign() <= 0) throw Error(ErrorKind::PreconditionFailed, "width must be positive");
  const auto& P = mm.partition();
  const long n = mm.base();
  const auto p = static_cast<std::size_t>(P.size());
  Rational longest(0);
  std::vector<long> k(p);
  for (std::size_t i = 0; i < p; ++i) {
    longest = std::max(longest, P.length(static_cast<std::int64_t>(i)));
    k[i] = *exact_log(P.slope(static_cast<std::int64_t>(i)), n);
  }
  if (longest <= width) return 0;
  long E = 0;
  while (Rational::power(n, E) < longest / width) ++E;

  // f[i]: least exponent sum along an admissible itinerary of length q from i.
  std::vector<long> f = k;
  for (long q = 1; q <= 64 * static_cast<long>(p); ++q) {
    long kappa = *std::min_element(f.begin(), f.end());
    if (kappa > 0) return q * ((E + kappa - 1) / kappa);
    std::vector<long> next(p);
    for (std::size_t i = 0; i < p; ++i) {
      long best = std::numeric_limits<long>::max();
      for (long t = 0; t < n; ++t) {
        best = std::min(best, f[(static_cast<std::size_t>(n) * i + static_cast<std::size_t>(t)) % p]);
      }
      next[i] = k[i] + best;
    }
    f = std::move(next);
  }
  throw Error(ErrorKind::BudgetExceeded, "g shows no expansion along itineraries");
}

bool equal_pairs(const AffineMarkovPartition& p) {
  if (p.base() != 2) throw Error(ErrorKind::WrongBase, "equal pairs needs n = 2");
  if (p.size() % 2 != 0) {
    throw Error(ErrorKind::OddCount, std::to_string(p.size()) + " intervals");
  }
  const auto& L = p.lengths();
  for (std::size_t i = 0; i + 1 < L.size(); i += 2) {
    if (L[i] != L[i + 1]) return false;
  }
  return true;
}

PLCircleMap extract_pl_h(const Conjugator& c) {
  const auto& P = c.markov().partition();
  if (!equal_pairs(P)) {
    throw Error(ErrorKind::NotPL, "equal pairs condition fails");
  }
  const long n = P.base();
  const Rational step = Rational(n - 1) / Rational(P.size());
  std::vector<Rational> cuts;
  std::vector<AffinePiece> pieces;
  for (std::int64_t i = 0; i < P.size(); ++i) {
    Rational y = step * Rational(i);
    Rational s = P.length(i) / step;
    cuts.push_back(y);
    pieces.push_back({s, P.endpoint(i) - s * y});
  }
  return PLCircleMap::from_segments(n - 1, std::move(cuts), std::move(pieces));
}

std::vector<Rational> periodic_points(const PLCircleMap& m, int q) {
  if (q < 1) throw Error(ErrorKind::PreconditionFailed, "period must be >= 1");
  const PLCircleMap M = iterate(m, q);
  const Rational R(M.circumference());
  const auto& starts = M.segment_starts();
  const auto& segs = M.segment_pieces();
  std::vector<Rational> out;
  for (std::size_t j = 0; j < starts.size(); ++j) {
    const Rational& u = starts[j];
    const Rational& v = j + 1 < starts.size() ? starts[j + 1] : R;
    const Rational s = segs[j].slope;
    const Rational c = segs[j].intercept;
    if (s == Rational(1)) {
      if ((c / R).is_integer()) {
        throw Error(ErrorKind::NeutralBranch,
                    "m^" + std::to_string(q) + " fixes [" + u.str() + ", " + v.str() + ")");
      }
      continue;
    }
    // s x + c = x + k r with x in [u, v).
    const Rational a = s - Rational(1);
    BigInt k0, k1;
    if (a.sign() > 0) {
      k0 = ((a * u + c) / R).ceil();
      k1 = ((a * v + c) / R).ceil() - 1;
    } else {
      k0 = ((a * v + c) / R).floor() + 1;
      k1 = ((a * u + c) / R).floor();
    }
    for (BigInt k = k0; k <= k1; ++k) {
      out.push_back((Rational(k) * R - c) / a);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Rational> least_period_points(const PLCircleMap& m, int q) {
  std::vector<Rational> pts = periodic_points(m, q);
  for (int d = 1; d < q; ++d) {
    if (q % d != 0) continue;
    auto lower = periodic_points(m, d);
    std::erase_if(pts, [&](const Rational& x) {
      return std::binary_search(lower.begin(), lower.end(), x);
    });
  }
  return pts;
}

}  // namespace chameleon
