#pragma once

#include <random>

#include "chameleon/pl_map.hpp"

namespace chameleon {

/// A random element of T_{2,1} fixing 0: up to max_points dyadic points of
/// (0, 1) with denominators dividing 2^max_exponent, sent to equally many
/// random dyadic images by matched power-of-2 subdivisions.
PLCircleMap random_t21(std::mt19937_64& rng, int max_points = 8, long max_exponent = 6);

}  // namespace chameleon
