#pragma once

// Scalar field evaluators used as actions S(q), pre-potentials χ(q),
// conformal factors ρ(q) and gauge functions.

#include <cmath>
#include <random>
#include <vector>

#include "aqm/numerics.hpp"

namespace aqm {

template <int N>
class ConstantField {
 public:
  explicit ConstantField(double value = 0.0) : value_(value) {}
  double operator()(const Vec<N>&) const { return value_; }

 private:
  double value_;
};

// S(q) = c + p·q.
template <int N>
class LinearField {
 public:
  explicit LinearField(const Vec<N>& p, double c = 0.0) : p_(p), c_(c) {}
  double operator()(const Vec<N>& q) const { return c_ + p_.dot(q); }
  const Vec<N>& slope() const { return p_; }

 private:
  Vec<N> p_;
  double c_;
};

// exp(c·q + c0): closed-form test pre-potential.
template <int N>
class ExponentialField {
 public:
  explicit ExponentialField(const Vec<N>& c, double c0 = 0.0) : c_(c), c0_(c0) {}
  double operator()(const Vec<N>& q) const { return std::exp(c0_ + c_.dot(q)); }
  const Vec<N>& rate() const { return c_; }

 private:
  Vec<N> c_;
  double c0_;
};

// Band-limited random field: a quadratic polynomial plus a few sinusoids,
// all coefficients drawn in [-1, 1] and scaled by `amplitude`. Smooth on the
// whole chart so central differences stay accurate at h ~ 1e-3.
template <int N>
class BandLimitedField {
 public:
  struct Mode {
    Vec<N> k;
    double amplitude;
    double phase;
  };

  BandLimitedField() = default;

  template <class Rng>
  static BandLimitedField random(Rng& rng, double amplitude = 1.0, int modes = 3,
                                 double quadratic_scale = 0.3) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    BandLimitedField f;
    f.c0_ = amplitude * u(rng);
    for (int i = 0; i < N; ++i) f.lin_[i] = amplitude * u(rng);
    for (int i = 0; i < N; ++i)
      for (int j = i; j < N; ++j) {
        const double v = amplitude * quadratic_scale * u(rng);
        f.quad_(i, j) = f.quad_(j, i) = (i == j) ? v : 0.5 * v;
      }
    for (int m = 0; m < modes; ++m) {
      Mode mode;
      for (int i = 0; i < N; ++i) mode.k[i] = u(rng);
      mode.amplitude = amplitude * u(rng);
      mode.phase = kPi * u(rng);
      f.modes_.push_back(mode);
    }
    return f;
  }

  double operator()(const Vec<N>& q) const {
    double v = c0_ + lin_.dot(q) + q.dot(quad_ * q);
    for (const Mode& m : modes_) v += m.amplitude * std::sin(m.k.dot(q) + m.phase);
    return v;
  }

 private:
  double c0_ = 0.0;
  Vec<N> lin_ = Vec<N>::Zero();
  Mat<N> quad_ = Mat<N>::Zero();
  std::vector<Mode> modes_;
};

// exp(f(q)) of a band-limited f: a strictly positive smooth field.
template <int N>
class PositiveField {
 public:
  PositiveField() = default;
  explicit PositiveField(BandLimitedField<N> log_field) : log_(std::move(log_field)) {}

  PositiveField(BandLimitedField<N> log_field, const Vec<N>& tilt)
      : log_(std::move(log_field)), tilt_(tilt) {}

  template <class Rng>
  static PositiveField random(Rng& rng, double log_amplitude = 0.3) {
    return PositiveField(BandLimitedField<N>::random(rng, log_amplitude));
  }

  // exp(t·q + f(q)) where t has norm `tilt` and points in a uniformly random
  // direction inside the coordinate slots [first, last). If those slots carry
  // a flat Euclidean block of the metric, |∇ln χ|² stays near tilt² wherever f
  // is small, which keeps the Weyl correction R_W − R away from zero.
  template <class Rng>
  static PositiveField random_tilted(Rng& rng, double tilt, int first, int last,
                                     double log_amplitude = 0.1) {
    std::normal_distribution<double> gauss;
    Vec<N> t = Vec<N>::Zero();
    for (int i = first; i < last; ++i) t[i] = gauss(rng);
    t *= tilt / t.norm();
    return PositiveField(BandLimitedField<N>::random(rng, log_amplitude), t);
  }

  double operator()(const Vec<N>& q) const { return std::exp(tilt_.dot(q) + log_(q)); }

 private:
  BandLimitedField<N> log_;
  Vec<N> tilt_ = Vec<N>::Zero();
};

}  // namespace aqm
