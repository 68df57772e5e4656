#include "chameleon/rational.hpp"

#include <cctype>
#include <limits>

#include "chameleon/error.hpp"

namespace chameleon {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::WrongBase: return "WrongBase";
    case ErrorKind::ExponentTooSmall: return "ExponentTooSmall";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::NotAPowerRatio: return "NotAPowerRatio";
    case ErrorKind::InconsistentResidue: return "InconsistentResidue";
    case ErrorKind::NotInDelta: return "NotInDelta";
    case ErrorKind::NotIncreasing: return "NotIncreasing";
    case ErrorKind::NonzeroDn: return "NonzeroDn";
    case ErrorKind::BadCyclicOrder: return "BadCyclicOrder";
    case ErrorKind::SlopeNotPowerOfN: return "SlopeNotPowerOfN";
    case ErrorKind::EndpointNotNAdic: return "EndpointNotNAdic";
    case ErrorKind::NotMarkov: return "NotMarkov";
    case ErrorKind::NotPowerForm: return "NotPowerForm";
    case ErrorKind::ClassMismatch: return "ClassMismatch";
    case ErrorKind::FixedPointsNotVertices: return "FixedPointsNotVertices";
    case ErrorKind::NotAVertex: return "NotAVertex";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::OddCount: return "OddCount";
    case ErrorKind::NotPL: return "NotPL";
    case ErrorKind::NeutralBranch: return "NeutralBranch";
    case ErrorKind::DivergentCycle: return "DivergentCycle";
    case ErrorKind::DivergentFixedPoint: return "DivergentFixedPoint";
    case ErrorKind::ReconstructionMismatch: return "ReconstructionMismatch";
    case ErrorKind::SlopeNotPowerOfTwo: return "SlopeNotPowerOfTwo";
    case ErrorKind::BadLength: return "BadLength";
  }
  return "Unknown";
}

Rational::Rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw Error(ErrorKind::PreconditionFailed, "zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

namespace {

bool parse_integer(std::string_view s, BigInt& out) {
  if (s.empty()) return false;
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size()) return false;
  for (std::size_t i = start; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  std::string digits(s[0] == '+' ? s.substr(1) : s);
  return out.set_str(digits, 10) == 0;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  BigInt num, den(1);
  auto slash = text.find('/');
  std::string_view head = text.substr(0, slash);
  bool ok = parse_integer(head, num);
  if (ok && slash != std::string_view::npos) {
    std::string_view tail = text.substr(slash + 1);
    ok = !tail.empty() && tail[0] != '-' && tail[0] != '+' &&
         parse_integer(tail, den);
  }
  if (!ok || den == 0) {
    throw Error(ErrorKind::ParseError,
                "not a rational: '" + std::string(text) + "'");
  }
  return Rational(num, den);
}

Rational Rational::power(long n, long k) {
  BigInt p;
  mpz_pow_ui(p.get_mpz_t(), BigInt(n).get_mpz_t(),
             static_cast<unsigned long>(k < 0 ? -k : k));
  if (k >= 0) return Rational(p);
  return Rational(BigInt(1), p);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw Error(ErrorKind::PreconditionFailed, "division by zero");
  q_ /= o.q_;
  return *this;
}

BigInt Rational::floor() const {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return r;
}

BigInt Rational::ceil() const {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return r;
}

Rational Rational::mod(const Rational& r) const {
  Rational k((*this / r).floor());
  return *this - k * r;
}

Rational Rational::abs() const { return sign() < 0 ? -*this : *this; }

std::string Rational::str() const {
  if (is_integer()) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::optional<long> exact_log(const Rational& q, long n) {
  if (q.sign() <= 0 || n < 2) return std::nullopt;
  BigInt num = q.num(), den = q.den();
  bool inverted = false;
  if (num == 1 && den != 1) {
    std::swap(num, den);
    inverted = true;
  } else if (den != 1) {
    return std::nullopt;
  }
  long k = 0;
  while (num > 1) {
    if (!mpz_divisible_ui_p(num.get_mpz_t(), static_cast<unsigned long>(n))) {
      return std::nullopt;
    }
    num /= n;
    ++k;
  }
  return inverted ? -k : k;
}

std::int64_t to_int64(const BigInt& v) {
  if (!v.fits_slong_p()) {
    throw Error(ErrorKind::BudgetExceeded, "integer exceeds 64 bits: " + v.get_str());
  }
  return v.get_si();
}

}  // namespace chameleon

std::size_t std::hash<chameleon::Rational>::operator()(
    const chameleon::Rational& r) const noexcept {
  return std::hash<std::string>{}(r.str());
}
