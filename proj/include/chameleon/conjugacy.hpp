#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chameleon/error.hpp"
#include "chameleon/markov.hpp"

namespace chameleon {

inline constexpr long kDefaultMemoDepth = 16;

/// kDefaultMemoDepth unless CHAMELEON_MAX_DEPTH holds a non-negative integer.
long default_memo_depth();

struct Enclosure {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
};

/// BudgetExceeded from an enclosure query, carrying the tightest enclosure
/// reached.
class EnclosureBudgetExceeded : public Error {
 public:
  EnclosureBudgetExceeded(const std::string& what, Enclosure best)
      : Error(ErrorKind::BudgetExceeded, what), best_(std::move(best)) {}
  const Enclosure& best() const { return best_; }

 private:
  Enclosure best_;
};

/// Where a level table fails to be carried onto its parent by g.
struct TableWitness {
  long depth = 0;
  std::int64_t index = 0;
  Rational value;
  Rational image;
  Rational expected;
};

struct ConjugacyCheck {
  bool holds = true;
  long depth = 0;
  std::optional<TableWitness> witness;
};

struct DyadicCounterexample {
  enum class Detector { Vertex, Periodic };
  Detector detector;
  /// A point of Z[1/n] outside h(Z[1/n]).
  Rational point;
  /// Vertex detector: the non-n-adic preimage under h.
  std::optional<Rational> preimage;
  /// Periodic detector: the least period.
  std::optional<long> period;
};

struct DyadicImageStatus {
  long depth = 0;
  bool subset_holds = true;
  std::optional<Rational> subset_witness;
  std::optional<DyadicCounterexample> counterexample;
};

/// The homeomorphism h with g = h nu_n h^-1 attached to a Markov map,
/// evaluated through the paired derived partitions.
class Conjugator {
 public:
  explicit Conjugator(MarkovMap mm, long memo_depth = default_memo_depth());

  const MarkovMap& markov() const { return mm_; }
  long memo_depth() const { return memo_depth_; }

  /// h(q) for q a vertex of some derived Q table (every n-adic q when n-1
  /// divides p). Throws FixedPointsNotVertices, BudgetExceeded or NotAVertex.
  Rational h_eval(const Rational& q) const;
  /// h^-1(x) for x a derived P vertex. Throws NotAVertex.
  Rational h_inverse_eval(const Rational& x) const;
  /// [lo, hi] containing h(q) with hi - lo <= width. Throws
  /// EnclosureBudgetExceeded.
  Enclosure h_eval_enclosure(const Rational& q, const Rational& width) const;

  ConjugacyCheck check_conjugacy(long depth) const;
  DyadicImageStatus dyadic_image_status(long depth) const;

  /// Derived P tables for depths 0..depth.
  std::vector<std::vector<Rational>> level_tables(long depth) const;

 private:
  MarkovMap mm_;
  long memo_depth_;
};

/// Checks g(T_d[j]) == T_{d-1}[j mod |T_{d-1}|] for d >= 1 and
/// g(T_0[j]) == T_0[n j mod p].
ConjugacyCheck check_level_tables(const PLCircleMap& g,
                                  const std::vector<std::vector<Rational>>& tables);

/// Number of derivation steps after which every derived interval is at most
/// `width` long.
long enclosure_step_bound(const MarkovMap& mm, const Rational& width);

/// L(I_{2i}) == L(I_{2i+1}) for all i. Throws WrongBase or OddCount.
bool equal_pairs(const AffineMarkovPartition& p);

/// The PL conjugator through (i(n-1)/p, x_i). Throws NotPL unless the equal
/// pairs condition holds.
PLCircleMap extract_pl_h(const Conjugator& c);

/// All x with m^q(x) = x, increasing. Throws NeutralBranch when m^q fixes
/// a whole segment.
std::vector<Rational> periodic_points(const PLCircleMap& m, int q);

/// Points of exact period q.
std::vector<Rational> least_period_points(const PLCircleMap& m, int q);

std::string to_string(DyadicCounterexample::Detector d);

}  // namespace chameleon
