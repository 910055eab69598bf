#pragma once

// Kinematics of the relativistic top on M4 x SO(3,1).
//
// Chart: Λ(θ) = Rx(θ1)·Ry(θ2)·Rz(θ3)·exp(θ4 K1 + θ5 K2 + θ6 K3). The first
// three angles are rotations, the last three a rapidity vector. The chart is
// regular at the identity and degenerates only at |θ2| = π/2.
//
// Conventions: G = diag(-1,1,1,1); angular velocity ω = (dΛ/dσ)Λ⁻¹ with the
// second index raised by G.

#include <array>
#include <cmath>
#include <string>

#include "aqm/errors.hpp"
#include "aqm/numerics.hpp"

namespace aqm {

inline constexpr double kRapidityMax = 3.0;
// Closest |cos θ2| allowed before the rotation chart counts as gimbal-locked.
inline constexpr double kGimbalTolerance = 1e-6;

struct ConfigPoint {
  Vec4 x = Vec4::Zero();
  Vec6 theta = Vec6::Zero();

  Vec10 coords() const {
    Vec10 q;
    q.head<4>() = x;
    q.tail<6>() = theta;
    return q;
  }

  static ConfigPoint from_coords(const Vec10& q) {
    return ConfigPoint{q.head<4>(), q.tail<6>()};
  }
};

inline Mat4 minkowski() { return Vec4(-1.0, 1.0, 1.0, 1.0).asDiagonal(); }

// so(3,1) basis in the vector representation. Index a = 0..2 are rotations
// about x, y, z; a = 3..5 are boosts along x, y, z.
//   [L_a, L_b] = ε_abc L_c, [L_a, B_b] = ε_abc B_c, [B_a, B_b] = -ε_abc L_c.
inline Mat4 rotation_generator(int axis) {
  Mat4 m = Mat4::Zero();
  const int i = 1 + (axis + 1) % 3;
  const int j = 1 + (axis + 2) % 3;
  m(j, i) = 1.0;
  m(i, j) = -1.0;
  return m;
}

inline Mat4 boost_generator(int axis) {
  Mat4 m = Mat4::Zero();
  m(0, 1 + axis) = 1.0;
  m(1 + axis, 0) = 1.0;
  return m;
}

inline Mat4 lie_basis(int a) { return a < 3 ? rotation_generator(a) : boost_generator(a - 3); }

// Structure constants C^c_ab of the basis above, tabulated by hand.
inline double structure_constant(int a, int b, int c) {
  const bool ra = a < 3, rb = b < 3, rc = c < 3;
  const int ia = a % 3, ib = b % 3, ic = c % 3;
  if (ra && rb) return rc ? levi_civita(ia, ib, ic) : 0.0;
  if (ra != rb) {
    if (rc) return 0.0;
    // [L_a, B_b] = ε B_c ; [B_a, L_b] = -[L_b, B_a] = -ε_bac B_c = ε_abc B_c
    return levi_civita(ia, ib, ic);
  }
  return rc ? -levi_civita(ia, ib, ic) : 0.0;
}

// Coordinates of an so(3,1) element in the basis above.
inline Vec6 lie_coordinates(const Mat4& x) {
  Vec6 c;
  c[0] = x(3, 2);
  c[1] = x(1, 3);
  c[2] = x(2, 1);
  c[3] = x(0, 1);
  c[4] = x(0, 2);
  c[5] = x(0, 3);
  return c;
}

class LorentzMatrix {
 public:
  LorentzMatrix() = default;
  explicit LorentzMatrix(const Mat4& m) : m_(m) {}

  const Mat4& matrix() const { return m_; }
  double operator()(int mu, int nu) const { return m_(mu, nu); }

  // Λ⁻¹ = G Λᵀ G.
  LorentzMatrix inverse() const {
    const Mat4 g = minkowski();
    return LorentzMatrix(g * m_.transpose() * g);
  }

  double metric_defect() const {
    const Mat4 g = minkowski();
    return (m_.transpose() * g * m_ - g).cwiseAbs().maxCoeff();
  }

  bool is_proper_orthochronous(double tol = 1e-12) const {
    return metric_defect() < tol && std::abs(m_.determinant() - 1.0) < 1e2 * tol &&
           m_(0, 0) >= 1.0 - tol;
  }

 private:
  Mat4 m_ = Mat4::Identity();
};

struct AngularVelocity {
  Mat4 omega_up = Mat4::Zero();  // ω^μν

  double antisymmetry_defect() const {
    return (omega_up + omega_up.transpose()).cwiseAbs().maxCoeff();
  }
};

namespace detail {

inline Mat4 axis_rotation(int axis, double angle) {
  const Mat4 l = rotation_generator(axis);
  // exp(angle·L) = I + sin·L + (1 - cos)·L²
  return Mat4::Identity() + std::sin(angle) * l + (1.0 - std::cos(angle)) * l * l;
}

// Entire functions of x = η² used by the pure boost and its gradient:
//   s1 = sinh η / η, c2 = (cosh η - 1)/η², and their d/dx.
struct BoostSeries {
  double s1, ds1, c2, dc2;
};

inline BoostSeries boost_series(double x) {
  BoostSeries r{0.0, 0.0, 0.0, 0.0};
  // term_s = x^k/(2k+1)!, term_c = x^k/(2k+2)!
  double ts = 1.0;
  double tc = 0.5;
  for (int k = 0; k < 80; ++k) {
    r.s1 += ts;
    r.c2 += tc;
    if (k + 1 < 80) {
      r.ds1 += (k + 1) * ts / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
      r.dc2 += (k + 1) * tc / ((2.0 * k + 3.0) * (2.0 * k + 4.0));
    }
    ts *= x / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
    tc *= x / ((2.0 * k + 3.0) * (2.0 * k + 4.0));
    if (ts < 1e-18 * r.s1 && tc < 1e-18 * r.c2) break;
  }
  return r;
}

inline Mat4 pure_boost(const Vec3& b) {
  const BoostSeries f = boost_series(b.squaredNorm());
  Mat4 m = Mat4::Identity();
  m(0, 0) = 1.0 + b.squaredNorm() * f.c2;
  for (int i = 0; i < 3; ++i) {
    m(0, 1 + i) = m(1 + i, 0) = b[i] * f.s1;
    for (int j = 0; j < 3; ++j) m(1 + i, 1 + j) += f.c2 * b[i] * b[j];
  }
  return m;
}

inline std::array<Mat4, 3> pure_boost_partials(const Vec3& b) {
  const BoostSeries f = boost_series(b.squaredNorm());
  std::array<Mat4, 3> d;
  for (int k = 0; k < 3; ++k) {
    Mat4 m = Mat4::Zero();
    m(0, 0) = f.s1 * b[k];  // d cosh η / d b_k
    for (int i = 0; i < 3; ++i) {
      const double d0i = (i == k ? f.s1 : 0.0) + 2.0 * f.ds1 * b[i] * b[k];
      m(0, 1 + i) = m(1 + i, 0) = d0i;
      for (int j = 0; j < 3; ++j) {
        m(1 + i, 1 + j) = 2.0 * f.dc2 * b[k] * b[i] * b[j] +
                          f.c2 * ((i == k ? b[j] : 0.0) + (j == k ? b[i] : 0.0));
      }
    }
    d[k] = m;
  }
  return d;
}

inline void check_angles(const Vec6& theta, double rapidity_max) {
  for (int a = 0; a < 6; ++a) {
    if (!std::isfinite(theta[a])) throw DomainError("non-finite Euler angle");
  }
  for (int a = 3; a < 6; ++a) {
    if (std::abs(theta[a]) > rapidity_max) {
      throw DomainError("boost rapidity " + std::to_string(theta[a]) + " exceeds bound " +
                        std::to_string(rapidity_max));
    }
  }
}

}  // namespace detail

inline LorentzMatrix lorentz_from_angles(const Vec6& theta, double rapidity_max = kRapidityMax) {
  detail::check_angles(theta, rapidity_max);
  const Mat4 r = detail::axis_rotation(0, theta[0]) * detail::axis_rotation(1, theta[1]) *
                 detail::axis_rotation(2, theta[2]);
  return LorentzMatrix(r * detail::pure_boost(theta.tail<3>()));
}

// Analytic ∂Λ/∂θ^α for the chart factorization.
inline std::array<Mat4, 6> lorentz_partials(const Vec6& theta, double rapidity_max = kRapidityMax) {
  detail::check_angles(theta, rapidity_max);
  const Mat4 rx = detail::axis_rotation(0, theta[0]);
  const Mat4 ry = detail::axis_rotation(1, theta[1]);
  const Mat4 rz = detail::axis_rotation(2, theta[2]);
  const Vec3 b = theta.tail<3>();
  const Mat4 boost = detail::pure_boost(b);
  const auto dboost = detail::pure_boost_partials(b);
  const Mat4 r = rx * ry * rz;

  std::array<Mat4, 6> d;
  d[0] = rotation_generator(0) * r * boost;
  d[1] = rx * rotation_generator(1) * ry * rz * boost;
  d[2] = r * rotation_generator(2) * boost;
  for (int k = 0; k < 3; ++k) d[3 + k] = r * dboost[k];
  return d;
}

// Right Maurer-Cartan form: (∂_α Λ)Λ⁻¹ = ϑ^a_α T_a. Rows a, columns α.
inline Mat6 maurer_cartan(const Vec6& theta, double rapidity_max = kRapidityMax) {
  const Mat4 inv = lorentz_from_angles(theta, rapidity_max).inverse().matrix();
  const auto d = lorentz_partials(theta, rapidity_max);
  Mat6 form;
  for (int alpha = 0; alpha < 6; ++alpha) form.col(alpha) = lie_coordinates(d[alpha] * inv);
  return form;
}

inline AngularVelocity angular_velocity(const Vec6& theta, const Vec6& dtheta,
                                        double rapidity_max = kRapidityMax) {
  const LorentzMatrix lam = lorentz_from_angles(theta, rapidity_max);
  const auto d = lorentz_partials(theta, rapidity_max);
  Mat4 dlam = Mat4::Zero();
  for (int a = 0; a < 6; ++a) dlam += dtheta[a] * d[a];
  const Mat4 mixed = dlam * lam.inverse().matrix();  // ω^μ_ν
  return AngularVelocity{mixed * minkowski()};
}

// Σ_{μ<ν} ω_μν ω^μν: the independent-pair contraction. For a unit-rate
// rotation this is +1, for a unit-rate boost -1.
inline double pair_contraction(const AngularVelocity& w) {
  const Mat4 g = minkowski();
  const Mat4 lower = g * w.omega_up * g;
  double sum = 0.0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu) sum += lower(mu, nu) * w.omega_up(mu, nu);
  return sum;
}

// Metric of the top's configuration space:
//   g_ij dq^i dq^j = g_μν dx^μ dx^ν + a² Σ_{μ<ν} ω_μν ω^μν.
// The angular block is the polarization of that quadratic form over the six
// coordinate directions. Immutable; safe for concurrent evaluation.
class TopMetric {
 public:
  static constexpr int dim = kConfigDim;

  explicit TopMetric(double a, double rapidity_max = kRapidityMax)
      : a_(a), rapidity_max_(rapidity_max) {
    if (!(a > 0.0)) throw DomainError("length scale a must be positive");
  }

  double a() const { return a_; }
  double rapidity_max() const { return rapidity_max_; }

  Mat6 angular_block(const Vec6& theta) const {
    const LorentzMatrix lam = lorentz_from_angles(theta, rapidity_max_);
    const Mat4 inv = lam.inverse().matrix();
    const Mat4 g = minkowski();
    const auto d = lorentz_partials(theta, rapidity_max_);
    std::array<Mat4, 6> w;
    for (int alpha = 0; alpha < 6; ++alpha) w[alpha] = d[alpha] * inv * g;
    auto q = [&](const Mat4& up) { return pair_contraction(AngularVelocity{up}); };
    Mat6 block;
    for (int alpha = 0; alpha < 6; ++alpha) {
      for (int beta = alpha; beta < 6; ++beta) {
        const double v = 0.25 * (q(w[alpha] + w[beta]) - q(w[alpha] - w[beta]));
        block(alpha, beta) = block(beta, alpha) = a_ * a_ * v;
      }
    }
    return block;
  }

  Mat10 operator()(const Vec10& q) const {
    Mat10 m = Mat10::Zero();
    m.topLeftCorner<4, 4>() = minkowski();
    m.bottomRightCorner<6, 6>() = angular_block(q.tail<6>());
    return m;
  }

  Mat10 operator()(const ConfigPoint& p) const { return (*this)(p.coords()); }

 private:
  double a_;
  double rapidity_max_;
};

inline Mat10 metric_at(const ConfigPoint& point, double a) { return TopMetric(a)(point); }

inline Mat10 inverse_metric_at(const ConfigPoint& point, double a) {
  const Mat10 g = metric_at(point, a);
  Mat10 inv = Mat10::Zero();
  inv.topLeftCorner<4, 4>() = minkowski();
  inv.bottomRightCorner<6, 6>() = checked_inverse<6>(g.bottomRightCorner<6, 6>());
  return inv;
}

// Points of the chart within the numerically comfortable domain.
inline bool in_chart(const Vec6& theta, double rapidity_max = kRapidityMax) {
  if (std::abs(std::cos(theta[1])) < kGimbalTolerance) return false;
  for (int a = 0; a < 6; ++a)
    if (!std::isfinite(theta[a])) return false;
  for (int a = 3; a < 6; ++a)
    if (std::abs(theta[a]) > rapidity_max) return false;
  return true;
}

}  // namespace aqm
