#pragma once

// Independent brute-force references used by the tests. None of these call
// into the code under test beyond plain map evaluation.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "chameleon/pl_map.hpp"

namespace oracle {

using chameleon::BigInt;
using chameleon::Rational;

inline Rational R(const char* s) { return Rational::parse(s); }

/// True when the denominator divides some power of n.
inline bool is_nadic(const Rational& q, long n) {
  BigInt power = 1;
  for (BigInt d = q.den(); d > 1; d /= 2) power *= n;
  return power % q.den() == 0;
}

/// Digit sum of a/n^e in base n, mod n-1 (0 when n = 2).
inline long digit_sum_phi(const Rational& q, long n) {
  if (n == 2) return 0;
  BigInt scale = 1;
  while (scale % q.den() != 0) scale *= n;
  BigInt a = q.num() * (scale / q.den());
  bool neg = a < 0;
  if (neg) a = -a;
  long sum = 0;
  while (a > 0) {
    BigInt r = a % n;
    sum += r.get_si();
    a /= n;
  }
  long m = n - 1;
  long s = sum % m;
  if (neg) s = (m - s) % m;
  return s;
}

/// Difference quotient of the lift at distance eps to the right of x.
inline Rational right_quotient(const chameleon::PLCircleMap& m, const Rational& x,
                               const Rational& eps) {
  return (m.lift(x + eps) - m.lift(x)) / eps;
}

inline Rational left_quotient(const chameleon::PLCircleMap& m, const Rational& x,
                              const Rational& eps) {
  return (m.lift(x) - m.lift(x - eps)) / eps;
}

/// log_n of right/left difference quotients at x; eps must be finer than
/// every gap between breakpoints near x.
inline long brute_break(const chameleon::PLCircleMap& m, const Rational& x, long n,
                        const Rational& eps = Rational::power(2, -60)) {
  Rational ratio = right_quotient(m, x, eps) / left_quotient(m, x, eps);
  long k = 0;
  while (ratio > Rational(1)) {
    ratio /= Rational(n);
    ++k;
  }
  while (ratio < Rational(1)) {
    ratio *= Rational(n);
    --k;
  }
  if (ratio != Rational(1)) throw std::runtime_error("slope ratio not a power");
  return k;
}

/// Endpoints x_i = (n-1)(L_0 + ... + L_{i-1}) / sum L.
inline std::vector<Rational> endpoints(long n, const std::vector<long>& L) {
  long total = 0;
  for (long v : L) total += v;
  std::vector<Rational> out;
  long acc = 0;
  for (long v : L) {
    out.push_back(Rational(n - 1) * Rational(acc, total));
    acc += v;
  }
  return out;
}

/// g evaluated straight from the Markov data: I_i goes affinely onto
/// I_{ni} u ... u I_{ni+n-1}.
inline Rational markov_g(long n, const std::vector<long>& L, const Rational& x) {
  const auto X = endpoints(n, L);
  const long p = static_cast<long>(L.size());
  const Rational r(n - 1);
  Rational u = x.mod(r);
  long i = p - 1;
  while (X[static_cast<std::size_t>(i)] > u) --i;
  auto lifted = [&](long j) {
    long q = j / p;
    return X[static_cast<std::size_t>(j % p)] + r * Rational(q);
  };
  Rational a = X[static_cast<std::size_t>(i)];
  Rational b = i + 1 < p ? X[static_cast<std::size_t>(i + 1)] : r;
  Rational c = lifted(n * i), d = lifted(n * i + n);
  return (c + (u - a) * (d - c) / (b - a)).mod(r);
}

/// Sum of brute-force breaks along the orbit until it repeats; nullopt if
/// the cycle carries a nonzero break.
inline std::optional<long> brute_sigma(const chameleon::PLCircleMap& g, Rational x, long n) {
  std::vector<Rational> seen;
  std::vector<long> breaks;
  while (true) {
    auto it = std::find(seen.begin(), seen.end(), x);
    if (it != seen.end()) {
      auto start = static_cast<std::size_t>(it - seen.begin());
      long total = 0;
      for (std::size_t i = 0; i < breaks.size(); ++i) {
        if (i >= start && breaks[i] != 0) return std::nullopt;
        total += breaks[i];
      }
      return total;
    }
    seen.push_back(x);
    breaks.push_back(brute_break(g, x, n));
    x = g(x);
  }
}

/// Random element of Delta_n: (n-1) b / n^e.
inline Rational random_delta(std::mt19937_64& rng, long n, long span = 40, long max_e = 3) {
  std::uniform_int_distribution<long> b(-span, span);
  std::uniform_int_distribution<long> e(0, max_e);
  return Rational(n - 1) * Rational(b(rng)) / Rational::power(n, e(rng));
}

inline std::vector<Rational> random_increasing_delta(std::mt19937_64& rng, long n, int k) {
  std::vector<Rational> v;
  while (static_cast<int>(v.size()) < k) {
    Rational x = random_delta(rng, n);
    if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
  }
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace oracle
