#include "chameleon/random_maps.hpp"

#include <algorithm>
#include <set>

#include "chameleon/interpolation.hpp"

namespace chameleon {

namespace {

std::vector<Rational> sorted_dyadics(std::mt19937_64& rng, int k, long e) {
  const long top = 1L << e;
  std::uniform_int_distribution<long> pick(1, top - 1);
  std::set<long> nums;
  while (static_cast<int>(nums.size()) < k) nums.insert(pick(rng));
  std::vector<Rational> out;
  for (long a : nums) out.push_back(Rational(a, top));
  return out;
}

}  // namespace

PLCircleMap random_t21(std::mt19937_64& rng, int max_points, long max_exponent) {
  const int cap = static_cast<int>(std::min<long>(max_points, (1L << max_exponent) - 1));
  std::uniform_int_distribution<int> count(0, cap);
  const int k = count(rng);
  std::vector<Rational> xs{Rational(0)}, ys{Rational(0)};
  for (const auto& x : sorted_dyadics(rng, k, max_exponent)) xs.push_back(x);
  for (const auto& y : sorted_dyadics(rng, k, max_exponent)) ys.push_back(y);
  xs.push_back(Rational(1));
  ys.push_back(Rational(1));
  return circle_map_from_interval(1, interpolate_interval(2, xs, ys));
}

}  // namespace chameleon
