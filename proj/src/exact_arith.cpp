#include "chameleon/exact_arith.hpp"

#include <numeric>

#include "chameleon/error.hpp"

namespace chameleon {

namespace {

bool divisible(const BigInt& a, long n) {
  return mpz_divisible_ui_p(a.get_mpz_t(), static_cast<unsigned long>(n)) != 0;
}

BigInt ipow(long n, long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(n),
                static_cast<unsigned long>(e));
  return r;
}

void require_base(long n) {
  if (n < 2) throw Error(ErrorKind::PreconditionFailed, "base must be >= 2");
}

}  // namespace

NAdic::NAdic(long base, BigInt mantissa, long exponent)
    : base_(base), mantissa_(std::move(mantissa)), exponent_(exponent) {
  require_base(base);
  if (exponent_ < 0) {
    throw Error(ErrorKind::PreconditionFailed, "negative n-adic exponent");
  }
  while (exponent_ > 0 && divisible(mantissa_, base_)) {
    mantissa_ /= base_;
    --exponent_;
  }
}

Rational NAdic::value() const { return Rational(mantissa_, ipow(base_, exponent_)); }

CirclePoint::CirclePoint(Rational value, long circumference)
    : value_(value.mod(Rational(circumference))), circumference_(circumference) {
  if (circumference <= 0) {
    throw Error(ErrorKind::PreconditionFailed, "circumference must be positive");
  }
}

std::optional<NAdic> to_nadic(const Rational& q, long n) {
  require_base(n);
  // q is in Z[1/n] iff every prime factor of the denominator divides n.
  BigInt rest = q.den();
  BigInt g;
  const BigInt bn(n);
  for (;;) {
    mpz_gcd(g.get_mpz_t(), rest.get_mpz_t(), bn.get_mpz_t());
    if (g == 1) break;
    rest /= g;
  }
  if (rest != 1) return std::nullopt;
  long e = 0;
  BigInt pw(1);
  while (!mpz_divisible_p(pw.get_mpz_t(), q.den().get_mpz_t())) {
    pw *= n;
    ++e;
  }
  BigInt a = q.num() * (pw / q.den());
  return NAdic(n, std::move(a), e);
}

long phi_n(const NAdic& x) {
  const long m = x.base() - 1;
  if (m == 1) return 0;
  // n = 1 mod (n-1), so a / n^e = a mod (n-1).
  BigInt r;
  mpz_fdiv_r_ui(r.get_mpz_t(), x.mantissa().get_mpz_t(),
                static_cast<unsigned long>(m));
  return r.get_si();
}

long phi_n(const Rational& q, long n) {
  auto x = to_nadic(q, n);
  if (!x) {
    throw Error(ErrorKind::PreconditionFailed, q.str() + " is not n-adic");
  }
  return phi_n(*x);
}

int trailing_zeros(std::int64_t i, long n) {
  return trailing_zeros(BigInt(static_cast<long>(i)), n);
}

int trailing_zeros(const BigInt& i, long n) {
  require_base(n);
  if (i == 0) {
    throw Error(ErrorKind::PreconditionFailed, "trailing_zeros of zero");
  }
  BigInt v = abs(i);
  int z = 0;
  while (divisible(v, n)) {
    v /= n;
    ++z;
  }
  return z;
}

NAdic omega_K(const NAdic& x, long K) {
  if (K < 0 || x.exponent() < K) {
    throw Error(ErrorKind::ExponentTooSmall,
                "exponent " + std::to_string(x.exponent()) + " < K = " +
                    std::to_string(K));
  }
  const long n = x.base();
  // nu_n^(e-K)(a/n^e) = a / n^K, reduced modulo (n-1).
  BigInt modulus = ipow(n, K) * (n - 1);
  BigInt a;
  mpz_fdiv_r(a.get_mpz_t(), x.mantissa().get_mpz_t(), modulus.get_mpz_t());
  return NAdic(n, std::move(a), K);
}

PointClass classify_point(const Rational& q, long n) {
  return is_nadic(q, n) ? PointClass::NAdicPoint : PointClass::RationalNonNAdic;
}

long gcd_long(long a, long b) { return std::gcd(a, b); }

}  // namespace chameleon
