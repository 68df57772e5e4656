#pragma once

#include <cstdint>
#include <optional>

#include "chameleon/rational.hpp"

namespace chameleon {

/// An element a / n^e of Z[1/n] in canonical form: e == 0 or n does not
/// divide a. The exponent is the position of the last nonzero base-n digit.
class NAdic {
 public:
  /// Canonicalizes (a, e); e must be non-negative.
  NAdic(long base, BigInt mantissa, long exponent);

  long base() const { return base_; }
  const BigInt& mantissa() const { return mantissa_; }
  long exponent() const { return exponent_; }

  Rational value() const;

  friend bool operator==(const NAdic&, const NAdic&) = default;

 private:
  long base_;
  BigInt mantissa_;
  long exponent_;
};

/// A point of the circle S_r = R / rZ held as its representative in [0, r).
class CirclePoint {
 public:
  CirclePoint(Rational value, long circumference);

  const Rational& value() const { return value_; }
  long circumference() const { return circumference_; }

  friend bool operator==(const CirclePoint&, const CirclePoint&) = default;

 private:
  Rational value_;
  long circumference_;
};

enum class PointClass { NAdicPoint, RationalNonNAdic };

/// Canonical n-adic form of q, or nullopt when q is not in Z[1/n].
std::optional<NAdic> to_nadic(const Rational& q, long n);

inline bool is_nadic(const Rational& q, long n) {
  return to_nadic(q, n).has_value();
}

/// The digit-sum homomorphism Z[1/n] -> Z_{n-1}; result in [0, n-1).
long phi_n(const NAdic& x);

/// phi_n of a rational that must lie in Z[1/n].
long phi_n(const Rational& q, long n);

/// Largest z with n^z | i (i >= 1).
int trailing_zeros(std::int64_t i, long n);
int trailing_zeros(const BigInt& i, long n);

/// nu_n^(e-K)(x) reduced into [0, n-1), where e is the canonical exponent of
/// x. Its base-n expansion is the last K digits of x. Throws ExponentTooSmall
/// when e < K.
NAdic omega_K(const NAdic& x, long K);

PointClass classify_point(const Rational& q, long n);

/// gcd of two positive integers.
long gcd_long(long a, long b);

}  // namespace chameleon
