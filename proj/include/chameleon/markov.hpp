#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "chameleon/pl_map.hpp"

namespace chameleon {

/// A partition of S_{n-1} into p intervals given by integer lengths in
/// arbitrary units; the endpoint x_0 sits at 0.
class AffineMarkovPartition {
 public:
  /// Throws PreconditionFailed for n < 2, non-positive lengths or p < n-1.
  AffineMarkovPartition(long n, std::vector<long> lengths);

  long base() const { return n_; }
  std::int64_t size() const { return static_cast<std::int64_t>(lengths_.size()); }
  const std::vector<long>& lengths() const { return lengths_; }
  /// (n-1) / sum of lengths.
  const Rational& unit() const { return unit_; }

  /// x_i for 0 <= i < p.
  const Rational& endpoint(std::int64_t i) const;
  /// x_{j mod p} + (n-1)(j div p), any j >= 0.
  Rational lifted_endpoint(std::int64_t j) const;
  /// True length of I_i.
  Rational length(std::int64_t i) const;
  /// L(I_{ni} u ... u I_{ni+n-1}) / L(I_i), indices mod p.
  Rational slope(std::int64_t i) const;

  /// m with p = (n-1) n^m, if p has that form.
  std::optional<long> power_exponent() const;

  friend bool operator==(const AffineMarkovPartition&,
                         const AffineMarkovPartition&) = default;

 private:
  long n_;
  std::vector<long> lengths_;
  Rational unit_;
  std::vector<Rational> endpoints_;
};

/// x_i^k: the image of i / n^k.
struct VertexRef {
  std::int64_t index = 0;
  long level = 0;

  friend bool operator==(const VertexRef&, const VertexRef&) = default;
};

/// Endpoints of one level of a Markov partition, increasing, in [0, n-1).
struct PartitionLevelTable {
  long base = 2;
  long level = 0;
  std::vector<Rational> endpoints;
};

/// A validated partition together with its degree-n map g.
class MarkovMap {
 public:
  /// Throws SlopeNotPowerOfN (naming the interval) or EndpointNotNAdic.
  static MarkovMap build(const AffineMarkovPartition& p);

  const AffineMarkovPartition& partition() const { return partition_; }
  const PLCircleMap& g() const { return g_; }
  const MembershipReport& report() const { return report_; }
  long base() const { return partition_.base(); }

  /// p n^d.
  std::int64_t derived_count(long depth) const;
  /// Endpoint j of the depth-d derived partition (j >= 0, lifted past p n^d).
  Rational derived_vertex(long depth, std::int64_t j) const;
  /// Matching endpoint (n-1) j / (p n^d) of the derived partitions for nu_n.
  Rational q_vertex(long depth, std::int64_t j) const;

  /// Indices i with a nonzero break of g at x_i.
  std::vector<std::int64_t> break_indices() const;

  /// m with p = (n-1) n^m; throws NotPowerForm otherwise.
  long power_exponent() const;
  /// Smallest k whose vertices include every break of g.
  long stable_level() const;
  /// x_i^k (lifted past the level period); requires power form.
  Rational vertex_value(const VertexRef& v) const;
  /// L(I_i^k) = x_{i+1}^k - x_i^k.
  Rational interval_length(const VertexRef& v) const;
  /// Level table for level k; requires power form.
  PartitionLevelTable level_table(long k) const;

 private:
  MarkovMap(AffineMarkovPartition p, PLCircleMap g, MembershipReport r)
      : partition_(std::move(p)), g_(std::move(g)), report_(std::move(r)) {}

  AffineMarkovPartition partition_;
  PLCircleMap g_;
  MembershipReport report_;
};

/// Endpoints i / n^k of the standard level-k partition for nu_n.
PartitionLevelTable standard_partition(long n, long k);

/// The partition one level finer, pulled back through g. Throws NotMarkov if
/// g does not carry each interval onto n consecutive intervals.
PartitionLevelTable derive(const PartitionLevelTable& table, const PLCircleMap& g);

/// max(k - z(i), 0), and 0 when i vanishes modulo (n-1) n^k.
long natural_level(const VertexRef& v, long n);

/// The vertex at its natural level: (i / n^z, lambda).
VertexRef natural_form(const VertexRef& v, long n);

/// phi_n(i / n^k) as an element of [0, n-1).
long extended_orbit_class(const VertexRef& v, long n);

/// L(I^{t+K}_{n^K k'}) / L(I^{s+K}_{n^K j'}) where (j', s) and (k', t) are
/// a and c at their natural levels. Throws ClassMismatch.
Rational natural_slope(const MarkovMap& mm, const VertexRef& a, const VertexRef& c);

}  // namespace chameleon
