#pragma once

#include <random>

#include "aqm/aqm.hpp"

namespace testing_support {

inline std::mt19937_64 rng_for(unsigned seed, unsigned index) {
  std::seed_seq seq{seed, index};
  return std::mt19937_64(seq);
}

// Chart angles away from gimbal lock: rotations in [-r, r], rapidities in [-b, b].
template <class Rng>
aqm::Vec6 random_angles(Rng& rng, double r = 1.0, double b = 1.0) {
  std::uniform_real_distribution<double> ur(-r, r), ub(-b, b);
  aqm::Vec6 t;
  for (int i = 0; i < 3; ++i) t[i] = ur(rng);
  for (int i = 3; i < 6; ++i) t[i] = ub(rng);
  return t;
}

template <class Rng>
aqm::Vec10 random_point(Rng& rng, double r = 1.0, double b = 1.0) {
  std::uniform_real_distribution<double> ux(-1.0, 1.0);
  aqm::Vec10 q;
  for (int i = 0; i < 4; ++i) q[i] = ux(rng);
  q.tail<6>() = random_angles(rng, r, b);
  return q;
}

template <class Rng>
aqm::Vec3 random_vec3(Rng& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return aqm::Vec3(u(rng), u(rng), u(rng));
}

}  // namespace testing_support
