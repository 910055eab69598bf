#pragma once

#include <cstdint>
#include <random>

#include "aqm/aqm.hpp"

namespace aqm::lab {

// One generator per (run seed, draw index), so reordering or skipping draws
// never shifts the stream of any other draw.
inline std::mt19937_64 rng_for(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

template <class Rng>
Vec6 random_angles(Rng& rng, double r = 1.0, double b = 1.0) {
  std::uniform_real_distribution<double> ur(-r, r), ub(-b, b);
  Vec6 t;
  for (int i = 0; i < 3; ++i) t[i] = ur(rng);
  for (int i = 3; i < 6; ++i) t[i] = ub(rng);
  return t;
}

template <class Rng>
Vec10 random_point(Rng& rng, double r = 1.0, double b = 1.0) {
  std::uniform_real_distribution<double> ux(-1.0, 1.0);
  Vec10 q;
  for (int i = 0; i < 4; ++i) q[i] = ux(rng);
  q.tail<6>() = random_angles(rng, r, b);
  return q;
}

template <class Rng>
Vec3 random_vec3(Rng& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return Vec3(u(rng), u(rng), u(rng));
}

// Smooth action plus a pre-potential with a unit spatial tilt. A purely
// band-limited χ sits so close to constant that the wrong-ξ control can
// vanish by accident; the tilt keeps R_W − R bounded away from zero.
struct LinearizationDraw {
  Vec10 q;
  BandLimitedField<10> s;
  PositiveField<10> chi;
};

inline LinearizationDraw linearization_draw(std::uint64_t seed, std::uint64_t index) {
  auto rng = rng_for(seed, index);
  LinearizationDraw d;
  d.q = random_point(rng);
  d.s = BandLimitedField<10>::random(rng, 1.0);
  d.chi = PositiveField<10>::random_tilted(rng, 1.0, 1, 4, 0.1);
  return d;
}

// Polynomial envelope times a plane wave, for the spinor operator checks.
struct SmoothSpinor {
  Spinor w0, w1;
  Vec4 k, c;
  Spinor operator()(const Vec4& x) const {
    const cplx i(0.0, 1.0);
    return (w0 + c.dot(x) * w1 + 0.1 * x.squaredNorm() * w0) * std::exp(i * k.dot(x));
  }
};

template <class Rng>
SmoothSpinor random_spinor(Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SmoothSpinor s;
  for (int i = 0; i < 4; ++i) {
    s.w0[i] = cplx(u(rng), u(rng));
    s.w1[i] = cplx(u(rng), u(rng));
    s.k[i] = u(rng);
    s.c[i] = u(rng);
  }
  return s;
}

template <class Rng>
Vec4 random_event(Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return Vec4(u(rng), u(rng), u(rng), u(rng));
}

}  // namespace aqm::lab
