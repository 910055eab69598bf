#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <type_traits>
#include <utility>

#include <Eigen/Dense>

#include "aqm/errors.hpp"

namespace aqm {

using cplx = std::complex<double>;

template <int N>
using Vec = Eigen::Matrix<double, N, 1>;
template <int N>
using Mat = Eigen::Matrix<double, N, N>;
template <int N>
using CVec = Eigen::Matrix<cplx, N, 1>;

using Vec3 = Vec<3>;
using Vec4 = Vec<4>;
using Vec6 = Vec<6>;
using Mat4 = Mat<4>;
using Mat6 = Mat<6>;

inline constexpr int kConfigDim = 10;
using Vec10 = Vec<kConfigDim>;
using Mat10 = Mat<kConfigDim>;

inline constexpr double kPi = 3.14159265358979323846;

// Central finite-difference parameters. `h` is the step for first derivatives
// of fields; `h_outer` is the step for the outer derivative in nested
// curvature evaluations (∂Γ).
struct Stencil {
  double h = 1e-3;
  double h_outer = 1e-2;
  int order = 4;
};

namespace detail {

// Antisymmetric central-difference weights w_k for offsets ±k, k = 1..order/2.
inline std::pair<const double*, int> central_weights(int order) {
  static constexpr double w2[] = {0.5};
  static constexpr double w4[] = {2.0 / 3.0, -1.0 / 12.0};
  static constexpr double w6[] = {3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
  static constexpr double w8[] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  switch (order) {
    case 2: return {w2, 1};
    case 4: return {w4, 2};
    case 6: return {w6, 3};
    case 8: return {w8, 4};
    default: throw DomainError("finite-difference order must be 2, 4, 6 or 8");
  }
}

template <class T>
T zero_like(const T& sample) {
  if constexpr (std::is_arithmetic_v<T>) {
    return T{0};
  } else if constexpr (std::is_same_v<T, cplx>) {
    return cplx{0.0, 0.0};
  } else {
    T z = sample;
    z.setZero();
    return z;
  }
}

}  // namespace detail

// ∂f/∂q^dir by a central stencil. f may return any type with +, - and scalar *.
template <int N, class F>
auto partial(const F& f, const Vec<N>& q, int dir, double h, int order = 4) {
  using R = std::decay_t<decltype(f(q))>;
  const auto [w, half] = detail::central_weights(order);
  Vec<N> qp = q;
  Vec<N> qm = q;
  R acc{};
  bool init = false;
  for (int k = 1; k <= half; ++k) {
    qp[dir] = q[dir] + k * h;
    qm[dir] = q[dir] - k * h;
    R term = f(qp);
    term -= f(qm);
    term *= w[k - 1];
    if (!init) {
      acc = term;
      init = true;
    } else {
      acc += term;
    }
  }
  acc *= 1.0 / h;
  return acc;
}

// All N partials of f at q.
template <int N, class F>
auto partials(const F& f, const Vec<N>& q, double h, int order = 4) {
  using R = std::decay_t<decltype(f(q))>;
  std::array<R, N> out;
  for (int d = 0; d < N; ++d) out[d] = partial<N>(f, q, d, h, order);
  return out;
}

template <int N, class F>
Vec<N> gradient(const F& f, const Vec<N>& q, double h, int order = 4) {
  Vec<N> g;
  for (int d = 0; d < N; ++d) g[d] = partial<N>(f, q, d, h, order);
  return g;
}

template <int N, class F>
CVec<N> complex_gradient(const F& f, const Vec<N>& q, double h, int order = 4) {
  CVec<N> g;
  for (int d = 0; d < N; ++d) g[d] = partial<N>(f, q, d, h, order);
  return g;
}

// Inverse with a conditioning check; throws NumericError on singular input.
template <int N>
Mat<N> checked_inverse(const Mat<N>& m, double rcond_floor = 1e-13) {
  Eigen::FullPivLU<Mat<N>> lu(m);
  if (!lu.isInvertible() || lu.rcond() < rcond_floor) {
    throw NumericError("singular or ill-conditioned matrix");
  }
  return lu.inverse();
}

inline int levi_civita(int a, int b, int c) {
  if (a == b || b == c || a == c) return 0;
  return ((b - a + 3) % 3 == 1) ? 1 : -1;
}

}  // namespace aqm
