#pragma once

// Metric evaluators besides the top metric. A metric is any callable
// q -> Mat<N> (symmetric, nondegenerate); every geometry kernel is a template
// over that callable, so fixtures and the top metric share one code path.

#include <cmath>
#include <concepts>

#include "aqm/config_space.hpp"
#include "aqm/numerics.hpp"

namespace aqm {

template <class M, int N>
concept MetricFieldOf = requires(const M& m, const Vec<N>& q) {
  { m(q) } -> std::convertible_to<Mat<N>>;
};

template <int N>
class ConstantMetric {
 public:
  static constexpr int dim = N;
  explicit ConstantMetric(const Mat<N>& g) : g_(g) {}
  Mat<N> operator()(const Vec<N>&) const { return g_; }

 private:
  Mat<N> g_;
};

// The top metric frozen at one chart point: flat, same signature.
inline ConstantMetric<kConfigDim> frozen_top_metric(const TopMetric& top, const Vec6& theta) {
  Vec10 q = Vec10::Zero();
  q.tail<6>() = theta;
  return ConstantMetric<kConfigDim>(top(q));
}

// Round 2-sphere of radius r in (θ, φ) coordinates.
class SphereMetric {
 public:
  static constexpr int dim = 2;
  explicit SphereMetric(double radius) : r_(radius) {}
  double radius() const { return r_; }
  Mat<2> operator()(const Vec<2>& q) const {
    Mat<2> g = Mat<2>::Zero();
    g(0, 0) = r_ * r_;
    g(1, 1) = r_ * r_ * std::sin(q[0]) * std::sin(q[0]);
    return g;
  }

 private:
  double r_;
};

// ρ(q)·g(q).
template <int N, class Base, class Rho>
class ConformalMetric {
 public:
  static constexpr int dim = N;
  ConformalMetric(Base base, Rho rho) : base_(std::move(base)), rho_(std::move(rho)) {}
  Mat<N> operator()(const Vec<N>& q) const { return rho_(q) * base_(q); }
  const Base& base() const { return base_; }
  const Rho& rho() const { return rho_; }

 private:
  Base base_;
  Rho rho_;
};

}  // namespace aqm
