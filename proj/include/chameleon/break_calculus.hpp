#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "chameleon/error.hpp"
#include "chameleon/markov.hpp"

namespace chameleon {

/// Sigma does not exist: some point on the eventual cycle has a nonzero break.
class DivergenceError : public Error {
 public:
  DivergenceError(ErrorKind kind, const std::string& what, std::vector<Rational> cycle,
                  std::vector<long> breaks)
      : Error(kind, what), cycle_(std::move(cycle)), breaks_(std::move(breaks)) {}

  const std::vector<Rational>& cycle() const { return cycle_; }
  const std::vector<long>& cycle_breaks() const { return breaks_; }

 private:
  std::vector<Rational> cycle_;
  std::vector<long> breaks_;
};

/// Total break value of g along the forward orbit of x. Throws
/// DivergentFixedPoint or DivergentCycle (as DivergenceError).
long sigma(const PLCircleMap& g, const Rational& x);

struct SigmaEntry {
  VertexRef vertex;
  Rational point;
  long value = 0;

  friend bool operator==(const SigmaEntry&, const SigmaEntry&) = default;
};

/// Sigma on the level-K vertices of natural level K.
struct SigmaTable {
  long base = 2;
  long stable_level = 0;
  std::vector<SigmaEntry> entries;

  std::vector<long> values() const;
  /// Entry for level-K index i (n does not divide i).
  const SigmaEntry& at_index(std::int64_t i) const;
};

SigmaTable sigma_table(const MarkovMap& mm);

struct CoboundaryCheck {
  bool holds = true;
  std::optional<Rational> witness;
};

/// g^b(x) == Sigma(x) - Sigma(g(x)) at every sample.
CoboundaryCheck coboundary_check(const PLCircleMap& g, const std::vector<Rational>& xs);

struct StarViolation {
  Rational x;
  Rational y;
  Rational meet;
  long p = 0;
  long q = 0;
  long accumulated_x = 0;
  long accumulated_y = 0;
};

/// Vertex pairs to level_bound whose orbits first meet with differing
/// accumulated break values (g^p)^b(x) != (g^q)^b(y).
std::vector<StarViolation> star_check(const MarkovMap& mm, long level_bound);

/// Every vertex up to level k (power form) or derived depth k.
std::vector<Rational> vertices_to_level(const MarkovMap& mm, long k);

struct CriterionVerdict {
  bool is_pl = false;
  /// PL: the reconstructed conjugator and its slope to the right of 0.
  std::optional<PLCircleMap> h_bar;
  std::optional<Rational> initial_slope;
  /// NotPL: two level-K entries with different Sigma.
  std::optional<std::pair<SigmaEntry, SigmaEntry>> witness;
};

/// Decides whether the conjugator of a base-2 partition is PL, rebuilding it
/// from the break function b = Sigma_0 - Sigma when it is. Without power
/// form the partition endpoints stand in for the levels below K, and Sigma
/// is taken up to a constant on cycles whose breaks sum to zero; the
/// witness then indexes endpoints at level 0. Throws WrongBase, divergence
/// errors, ReconstructionMismatch or SlopeNotPowerOfTwo.
CriterionVerdict pl_criterion(const MarkovMap& mm);

struct ZetaString {
  std::uint64_t prefix = 0;
  bool odd = false;
  std::vector<long> values;
};

/// The 2^zeta strings of a sequence of 2^(K-1) Sigma values, in prefix order.
/// Throws BadLength.
std::vector<ZetaString> zeta_strings(const std::vector<long>& values, long zeta);

/// First zeta whose scheduled even/odd comparison (prefix 0...00 against
/// 0...01) differs; nullopt iff the sequence is constant.
std::optional<long> zeta_schedule_discrepancy(const std::vector<long>& values);

struct SigmaDiscrepancy {
  std::int64_t i = 0;
  Rational d;
};

/// Smallest i in [1, 2^K) where Sigma(h(j/2^s + i/2^(s+K))) and
/// Sigma(h(k/2^t + i/2^(t+K+p))) differ, with d = x^{s+K}_{2^K j + i}.
std::optional<SigmaDiscrepancy> find_sigma_discrepancy(const MarkovMap& mm,
                                                       const SigmaTable& table,
                                                       const VertexRef& j,
                                                       const VertexRef& k, long p);

/// Base-2 partition of S_1 given by the images h(i/2^m), with m one past the
/// finest breakpoint of h. h must fix 0 and lie in T_{2,1}.
AffineMarkovPartition partition_from_conjugator(const PLCircleMap& h);

}  // namespace chameleon
