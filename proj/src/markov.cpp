#include "chameleon/markov.hpp"

#include <numeric>

#include "chameleon/error.hpp"

namespace chameleon {

namespace {

std::int64_t checked_pow(long n, long e) {
  std::int64_t r = 1;
  for (long i = 0; i < e; ++i) {
    if (__builtin_mul_overflow(r, static_cast<std::int64_t>(n), &r)) {
      throw Error(ErrorKind::BudgetExceeded,
                  "index range n^" + std::to_string(e) + " exceeds 64 bits");
    }
  }
  return r;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t floor_div(std::int64_t a, std::int64_t m) {
  return (a - floor_mod(a, m)) / m;
}

}  // namespace

AffineMarkovPartition::AffineMarkovPartition(long n, std::vector<long> lengths)
    : n_(n), lengths_(std::move(lengths)) {
  if (n < 2) throw Error(ErrorKind::PreconditionFailed, "base must be >= 2");
  if (lengths_.empty()) throw Error(ErrorKind::PreconditionFailed, "no intervals");
  BigInt total(0);
  for (long L : lengths_) {
    if (L <= 0) throw Error(ErrorKind::PreconditionFailed, "lengths must be positive");
    total += L;
  }
  if (static_cast<long>(lengths_.size()) < n - 1) {
    throw Error(ErrorKind::PreconditionFailed, "need at least n-1 intervals");
  }
  unit_ = Rational(BigInt(n - 1), total);
  Rational x(0);
  for (long L : lengths_) {
    endpoints_.push_back(x);
    x += unit_ * Rational(L);
  }
}

const Rational& AffineMarkovPartition::endpoint(std::int64_t i) const {
  return endpoints_.at(static_cast<std::size_t>(i));
}

Rational AffineMarkovPartition::lifted_endpoint(std::int64_t j) const {
  return endpoint(floor_mod(j, size())) + Rational(n_ - 1) * Rational(floor_div(j, size()));
}

Rational AffineMarkovPartition::length(std::int64_t i) const {
  return unit_ * Rational(lengths_[static_cast<std::size_t>(floor_mod(i, size()))]);
}

Rational AffineMarkovPartition::slope(std::int64_t i) const {
  long image = 0;
  for (long t = 0; t < n_; ++t) {
    image += lengths_[static_cast<std::size_t>(floor_mod(n_ * i + t, size()))];
  }
  return Rational(image, lengths_[static_cast<std::size_t>(floor_mod(i, size()))]);
}

std::optional<long> AffineMarkovPartition::power_exponent() const {
  if (size() % (n_ - 1) != 0) return std::nullopt;
  std::int64_t q = size() / (n_ - 1);
  long m = 0;
  while (q % n_ == 0) {
    q /= n_;
    ++m;
  }
  if (q != 1) return std::nullopt;
  return m;
}

MarkovMap MarkovMap::build(const AffineMarkovPartition& p) {
  const long n = p.base();
  std::vector<Rational> cuts;
  std::vector<AffinePiece> pieces;
  for (std::int64_t i = 0; i < p.size(); ++i) {
    Rational s = p.slope(i);
    if (!exact_log(s, n)) {
      throw Error(ErrorKind::SlopeNotPowerOfN,
                  "slope " + s.str() + " on interval " + std::to_string(i) +
                      " is not a power of " + std::to_string(n));
    }
  }
  for (std::int64_t i = 0; i < p.size(); ++i) {
    if (!is_nadic(p.endpoint(i), n)) {
      throw Error(ErrorKind::EndpointNotNAdic,
                  "endpoint x_" + std::to_string(i) + " = " + p.endpoint(i).str() +
                      " is not n-adic");
    }
  }
  for (std::int64_t i = 0; i < p.size(); ++i) {
    Rational s = p.slope(i);
    cuts.push_back(p.endpoint(i));
    pieces.push_back({s, p.lifted_endpoint(n * i) - s * p.endpoint(i)});
  }
  PLCircleMap g = PLCircleMap::from_segments(n - 1, std::move(cuts), std::move(pieces));
  MembershipReport rep = classify(g, n);
  return MarkovMap(p, std::move(g), std::move(rep));
}

std::int64_t MarkovMap::derived_count(long depth) const {
  std::int64_t r;
  if (__builtin_mul_overflow(partition_.size(), checked_pow(base(), depth), &r)) {
    throw Error(ErrorKind::BudgetExceeded, "derived partition too large");
  }
  return r;
}

Rational MarkovMap::derived_vertex(long depth, std::int64_t j) const {
  const long n = base();
  if (depth == 0) return partition_.lifted_endpoint(j);
  const std::int64_t count = derived_count(depth);
  const std::int64_t lap = floor_div(j, count);
  j = floor_mod(j, count);
  const std::int64_t block = derived_count(depth - 1);
  // g carries the part of I_{i'} holding vertex j onto the parent level.
  const std::int64_t ip = j / checked_pow(n, depth);
  Rational y = derived_vertex(depth - 1, j % block) +
               Rational(n - 1) * Rational(static_cast<long>(j / block));
  const Rational s = partition_.slope(ip);
  Rational x = partition_.endpoint(ip) + (y - partition_.lifted_endpoint(n * ip)) / s;
  return x + Rational(n - 1) * Rational(lap);
}

Rational MarkovMap::q_vertex(long depth, std::int64_t j) const {
  return Rational(base() - 1) * Rational(j) / Rational(derived_count(depth));
}

std::vector<std::int64_t> MarkovMap::break_indices() const {
  std::vector<std::int64_t> out;
  for (std::int64_t i = 0; i < partition_.size(); ++i) {
    if (partition_.slope(i) != partition_.slope(i - 1 < 0 ? partition_.size() - 1 : i - 1)) {
      out.push_back(i);
    }
  }
  return out;
}

long MarkovMap::power_exponent() const {
  auto m = partition_.power_exponent();
  if (!m) {
    throw Error(ErrorKind::NotPowerForm,
                std::to_string(partition_.size()) + " intervals is not (n-1) n^m");
  }
  return *m;
}

long MarkovMap::stable_level() const {
  const long m = power_exponent();
  long K = 0;
  for (std::int64_t i : break_indices()) {
    if (i == 0) continue;
    K = std::max<long>(K, m - trailing_zeros(i, base()));
  }
  return K;
}

Rational MarkovMap::vertex_value(const VertexRef& v) const {
  const long m = power_exponent();
  if (v.level < 0 || v.index < 0) {
    throw Error(ErrorKind::PreconditionFailed, "negative vertex reference");
  }
  if (v.level <= m) {
    std::int64_t j;
    if (__builtin_mul_overflow(v.index, checked_pow(base(), m - v.level), &j)) {
      throw Error(ErrorKind::BudgetExceeded, "vertex index too large");
    }
    return partition_.lifted_endpoint(j);
  }
  return derived_vertex(v.level - m, v.index);
}

Rational MarkovMap::interval_length(const VertexRef& v) const {
  return vertex_value({v.index + 1, v.level}) - vertex_value(v);
}

PartitionLevelTable MarkovMap::level_table(long k) const {
  PartitionLevelTable t{base(), k, {}};
  const std::int64_t count = (base() - 1) * checked_pow(base(), k);
  t.endpoints.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) t.endpoints.push_back(vertex_value({i, k}));
  return t;
}

PartitionLevelTable standard_partition(long n, long k) {
  if (n < 2 || k < 0) throw Error(ErrorKind::PreconditionFailed, "bad standard partition");
  PartitionLevelTable t{n, k, {}};
  const std::int64_t scale = checked_pow(n, k);
  for (std::int64_t i = 0; i < (n - 1) * scale; ++i) {
    t.endpoints.push_back(Rational(i) / Rational(scale));
  }
  return t;
}

PartitionLevelTable derive(const PartitionLevelTable& table, const PLCircleMap& g) {
  const long n = table.base;
  const auto& e = table.endpoints;
  const auto N = static_cast<std::int64_t>(e.size());
  if (N == 0 || g.circumference() != n - 1 || g.degree() != n) {
    throw Error(ErrorKind::NotMarkov, "map and table do not match");
  }
  auto lifted = [&](std::int64_t j) {
    return e[static_cast<std::size_t>(floor_mod(j, N))] +
           Rational(n - 1) * Rational(floor_div(j, N));
  };
  PartitionLevelTable out{n, table.level + 1, {}};
  out.endpoints.reserve(static_cast<std::size_t>(N * n));
  for (std::int64_t i = 0; i < N; ++i) {
    Rational start = g.lift(e[static_cast<std::size_t>(i)]);
    Rational base = lifted(n * i);
    if (!((start - base) / Rational(n - 1)).is_integer()) {
      throw Error(ErrorKind::NotMarkov, "g(" + e[static_cast<std::size_t>(i)].str() +
                                            ") is not endpoint " + std::to_string(n * i));
    }
    for (long t = 0; t < n; ++t) {
      out.endpoints.push_back(g.lift_inverse(start + lifted(n * i + t) - base));
    }
  }
  return out;
}

long natural_level(const VertexRef& v, long n) {
  const std::int64_t period = (n - 1) * checked_pow(n, v.level);
  const std::int64_t i = floor_mod(v.index, period);
  if (i == 0) return 0;
  return std::max<long>(v.level - trailing_zeros(i, n), 0);
}

VertexRef natural_form(const VertexRef& v, long n) {
  const std::int64_t period = (n - 1) * checked_pow(n, v.level);
  std::int64_t i = floor_mod(v.index, period);
  long k = v.level;
  if (i == 0) return {0, 0};
  while (k > 0 && i % n == 0) {
    i /= n;
    --k;
  }
  return {i, k};
}

long extended_orbit_class(const VertexRef& v, long n) {
  if (n == 2) return 0;
  return static_cast<long>(floor_mod(v.index, n - 1));
}

Rational natural_slope(const MarkovMap& mm, const VertexRef& a, const VertexRef& c) {
  const long n = mm.base();
  if (extended_orbit_class(a, n) != extended_orbit_class(c, n)) {
    throw Error(ErrorKind::ClassMismatch, "vertices lie in different extended orbits");
  }
  const long K = mm.stable_level();
  const std::int64_t nk = checked_pow(n, K);
  VertexRef a0 = natural_form(a, n);
  VertexRef c0 = natural_form(c, n);
  return mm.interval_length({nk * c0.index, c0.level + K}) /
         mm.interval_length({nk * a0.index, a0.level + K});
}

}  // namespace chameleon
