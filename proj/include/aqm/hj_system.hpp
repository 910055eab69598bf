#pragma once

// Hamilton-Jacobi + divergence system of the conformal top, its conserved
// current, the wave-function ansatz and the linear wave operator it yields.
//
// Units: ħ = c = 1. The minimal-coupling charge e is explicit.
//
// Expanding the wave operator under ψ = χ^{-(n-2)/2} e^{iS} gives, pointwise,
//   Wψ/ψ = [g^ij P_i P_j + ξ² R_W] − i χ^{n-2} (1/√g) ∂_i(χ^{-(n-2)} √g g^ij P_j)
//        + (ξ² − ξ0²)(R − R_W),          ξ0² = (n−2)/(4(n−1)),
// with P_i = ∂_i S − e A_i and R_W in its pre-potential form. The last term
// vanishes only for ξ = ξ0; linearization_check measures the remainder.

#include <cmath>
#include <optional>

#include "aqm/config_space.hpp"
#include "aqm/errors.hpp"
#include "aqm/numerics.hpp"
#include "aqm/weyl_geometry.hpp"

namespace aqm {

// Right-invariant vector fields of SO(3,1) in the chart: column a holds the
// components ξ^α_a of the field generated by Λ → exp(t T_a)Λ.
inline Mat6 killing_vectors(const Vec6& theta, double rapidity_max = kRapidityMax) {
  if (std::abs(std::cos(theta[1])) < kGimbalTolerance) {
    throw ChartError("Euler chart is gimbal-locked at |θ2| = π/2");
  }
  return checked_inverse<6>(maurer_cartan(theta, rapidity_max));
}

// Dual one-forms ϑ^a_α (rows a): ϑ·ξ = I. These carry the covariant index.
inline Mat6 killing_forms(const Vec6& theta, double rapidity_max = kRapidityMax) {
  if (std::abs(std::cos(theta[1])) < kGimbalTolerance) {
    throw ChartError("Euler chart is gimbal-locked at |θ2| = π/2");
  }
  return maurer_cartan(theta, rapidity_max);
}

// Constant electromagnetic field in the linear gauge
//   A_0 = E·x (so φ = −E·x), A_k = ½(H × x)_k,
// giving F_0k = −E_k and F_ij = ε_ijk H_k.
struct EMConfig {
  Vec3 H = Vec3::Zero();
  Vec3 E = Vec3::Zero();
  double kappa = 2.0;
  double e_charge = 1.0;

  Vec4 potential(const Vec4& x) const {
    const Vec3 r = x.tail<3>();
    Vec4 a;
    a[0] = E.dot(r);
    a.tail<3>() = 0.5 * H.cross(r);
    return a;
  }

  Mat4 field_tensor() const {
    Mat4 f = Mat4::Zero();
    for (int k = 0; k < 3; ++k) {
      f(0, 1 + k) = -E[k];
      f(1 + k, 0) = E[k];
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) f(1 + i, 1 + j) += levi_civita(i, j, k) * H[k];
    return f;
  }

  // ½ F_μν F^μν = H² − E²
  double invariant() const { return H.squaredNorm() - E.squaredNorm(); }
};

// F_μν = ∂_μ A_ν − ∂_ν A_μ of a potential callable x -> Vec4, by central differences.
template <class Potential>
Mat4 field_tensor_from_potential(const Potential& a, const Vec4& x, const Stencil& st = Stencil{}) {
  const auto da = partials<4>([&](const Vec4& p) { return Vec4(a(p)); }, x, st.h, st.order);
  Mat4 f;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) f(mu, nu) = da[mu][nu] - da[nu][mu];
  return f;
}

// A_i = (A_μ(x), ϑ^a_α(θ) A_a) with A_a = −(κ a²/2)(H, E).
inline Vec10 extend_potential(const EMConfig& em, const ConfigPoint& point, double a,
                              double rapidity_max = kRapidityMax) {
  Vec10 out;
  out.head<4>() = em.potential(point.x);
  Vec6 frame;
  frame.head<3>() = em.H;
  frame.tail<3>() = em.E;
  frame *= -0.5 * em.kappa * a * a;
  out.tail<6>() = killing_forms(point.theta, rapidity_max).transpose() * frame;
  return out;
}

// Minimal coupling e·A_i of a covector potential on the N-dimensional space.
template <int N, class Potential>
struct Coupling {
  Potential potential;
  double charge = 1.0;

  Vec<N> eA(const Vec<N>& q) const { return charge * Vec<N>(potential(q)); }
};

template <int N>
struct ZeroPotential {
  Vec<N> operator()(const Vec<N>&) const { return Vec<N>::Zero(); }
};

template <int N>
Coupling<N, ZeroPotential<N>> uncoupled() {
  return {ZeroPotential<N>{}, 0.0};
}

struct ExtendedPotentialField {
  EMConfig em;
  double a = 1.0;
  Vec10 operator()(const Vec10& q) const {
    return extend_potential(em, ConfigPoint::from_coords(q), a);
  }
};

inline Coupling<kConfigDim, ExtendedPotentialField> em_coupling(const EMConfig& em, double a) {
  return {ExtendedPotentialField{em, a}, em.e_charge};
}

template <class Action, class Chi>
struct ScalarFieldPair {
  Action action;
  Chi chi;
};

template <class Action, class Chi>
ScalarFieldPair(Action, Chi) -> ScalarFieldPair<Action, Chi>;

inline double xi_squared(int n) {
  if (n < 2) throw DomainError("configuration dimension n must be at least 2");
  return double(n - 2) / (4.0 * double(n - 1));
}

inline double xi_constant(int n) {
  if (n < 3) throw DomainError("ξ requires n ≥ 3");
  return std::sqrt(xi_squared(n));
}

// P_i = ∂_i S − e A_i
template <int N, class Action, class Pot>
Vec<N> kinetic_momentum(const Action& s, const Coupling<N, Pot>& c, const Vec<N>& q,
                        const Stencil& st) {
  return gradient<N>(s, q, st.h, st.order) - c.eA(q);
}

template <int N, class Action, class Pot, class Metric>
double momentum_norm(const Action& s, const Coupling<N, Pot>& c, const Metric& metric,
                     const Vec<N>& q, const Stencil& st) {
  const Vec<N> p = kinetic_momentum<N>(s, c, q, st);
  return p.dot(metric_inverse<N>(metric, q) * p);
}

template <int N, class Chi>
double checked_chi(const Chi& chi, const Vec<N>& q) {
  const double v = chi(q);
  if (!(v > 0.0)) throw DomainError("pre-potential χ must be positive on the stencil");
  return v;
}

// g^ij P_i P_j + ξ² R_W. Zero iff the Hamilton-Jacobi equation holds at q.
// `ricci_scalar` may be supplied to share one curvature evaluation.
template <int N, class Action, class Chi, class Pot, class Metric>
double hj_residual(const ScalarFieldPair<Action, Chi>& f, const Coupling<N, Pot>& c,
                   const Metric& metric, const Vec<N>& q, int n, const Stencil& st = Stencil{},
                   std::optional<double> xi2 = std::nullopt,
                   std::optional<double> ricci_scalar = std::nullopt) {
  if (n != N) throw DomainError("dimension n must match the configuration space");
  const double x2 = xi2.value_or(xi_squared(n));
  const WeylGauge gauge([&](const Vec<N>& p) { return checked_chi<N>(f.chi, p); });
  const WeylTerms t = weyl_terms<N>(metric, gauge, q, st, ricci_scalar.value_or(NAN));
  return momentum_norm<N>(f.action, c, metric, q, st) + x2 * t.potential_form();
}

// j^i = χ^{−(n−2)} √|g| g^ij P_j
template <int N, class Action, class Chi, class Pot, class Metric>
Vec<N> hj_current(const ScalarFieldPair<Action, Chi>& f, const Coupling<N, Pot>& c,
                    const Metric& metric, const Vec<N>& q, int n, const Stencil& st = Stencil{}) {
  const double w = std::pow(checked_chi<N>(f.chi, q), -(n - 2));
  return w * sqrt_abs_det<N>(metric, q) * (metric_inverse<N>(metric, q) *
                                           kinetic_momentum<N>(f.action, c, q, st));
}

// (1/√|g|) ∂_i j^i with j from hj_current.
template <int N, class Action, class Chi, class Pot, class Metric>
double divergence_residual(const ScalarFieldPair<Action, Chi>& f, const Coupling<N, Pot>& c,
                           const Metric& metric, const Vec<N>& q, int n,
                           const Stencil& st = Stencil{}) {
  double div = 0.0;
  for (int i = 0; i < N; ++i) {
    div += partial<N>([&](const Vec<N>& p) { return hj_current<N>(f, c, metric, p, n, st)[i]; },
                      q, i, st.h, st.order);
  }
  return div / sqrt_abs_det<N>(metric, q);
}

// ψ(q) = χ(q)^{−(n−2)/2} e^{i S(q)}
template <class Action, class Chi>
class WaveFunction {
 public:
  WaveFunction(Action s, Chi chi, int n) : s_(std::move(s)), chi_(std::move(chi)), n_(n) {}

  template <int N>
  double modulus(const Vec<N>& q) const {
    return std::pow(checked_chi<N>(chi_, q), -0.5 * (n_ - 2));
  }
  template <int N>
  double phase(const Vec<N>& q) const {
    return s_(q);
  }
  template <int N>
  cplx operator()(const Vec<N>& q) const {
    return std::polar(modulus<N>(q), phase<N>(q));
  }

  int dim() const { return n_; }

 private:
  Action s_;
  Chi chi_;
  int n_;
};

template <class Action, class Chi>
WaveFunction<Action, Chi> ansatz(const ScalarFieldPair<Action, Chi>& f, int n) {
  return WaveFunction<Action, Chi>(f.action, f.chi, n);
}

// j^i = |ψ|² √|g| g^ij P_j
template <int N, class Psi, class Action, class Pot, class Metric>
Vec<N> wave_current(const Psi& psi, const Action& s, const Coupling<N, Pot>& c,
                    const Metric& metric, const Vec<N>& q, const Stencil& st = Stencil{}) {
  return std::norm(psi(q)) * sqrt_abs_det<N>(metric, q) *
         (metric_inverse<N>(metric, q) * kinetic_momentum<N>(s, c, q, st));
}

template <int N, class Psi>
double born_density(const Psi& psi, const Vec<N>& q) {
  return std::norm(cplx(psi(q)));
}

// g^ij(p̂_i − eA_i)(p̂_j − eA_j)ψ + ξ² R ψ with p̂ = −i∇, evaluated as
//   −(1/√g)(∂_i − ieA_i)[√g g^ij (∂_j − ieA_j)ψ] + ξ² R ψ.
template <int N, class Psi, class Pot, class Metric>
cplx wave_operator(const Psi& psi, const Coupling<N, Pot>& c, const Metric& metric,
                   const Vec<N>& q, double xi, const Stencil& st = Stencil{},
                   std::optional<double> ricci_scalar = std::nullopt) {
  const cplx I(0.0, 1.0);
  auto value = [&](const Vec<N>& p) { return cplx(psi(p)); };
  auto flux = [&](const Vec<N>& p) -> CVec<N> {
    const CVec<N> d = complex_gradient<N>(value, p, st.h, st.order) -
                      I * c.eA(p).template cast<cplx>() * value(p);
    return sqrt_abs_det<N>(metric, p) * (metric_inverse<N>(metric, p).template cast<cplx>() * d);
  };
  const CVec<N> f0 = flux(q);
  const Vec<N> ea = c.eA(q);
  cplx div = 0.0;
  for (int i = 0; i < N; ++i) {
    div += partial<N>([&](const Vec<N>& p) { return flux(p)[i]; }, q, i, st.h, st.order);
    div -= I * ea[i] * f0[i];
  }
  const double r = ricci_scalar ? *ricci_scalar : riemann_scalar_at<N>(metric, q, st);
  return -div / sqrt_abs_det<N>(metric, q) + xi * xi * r * value(q);
}

struct LinearizationResult {
  cplx defect;
  double hj_res = 0.0;
  double div_res = 0.0;
  cplx normalized_wave;  // Wψ/ψ
};

// Compares Wψ/ψ for ψ = ansatz(f) with hj_res − i χ^{n−2} div_res.
// `xi2` overrides ξ² in both the wave operator and the HJ equation.
template <int N, class Action, class Chi, class Pot, class Metric>
LinearizationResult linearization_check(const ScalarFieldPair<Action, Chi>& f,
                                        const Coupling<N, Pot>& c, const Metric& metric,
                                        const Vec<N>& q, int n, const Stencil& st = Stencil{},
                                        std::optional<double> xi2 = std::nullopt) {
  const double x2 = xi2.value_or(xi_squared(n));
  const double r = riemann_scalar_at<N>(metric, q, st);
  const auto psi = ansatz(f, n);
  LinearizationResult out;
  out.normalized_wave = wave_operator<N>(psi, c, metric, q, std::sqrt(x2), st, r) / psi(q);
  out.hj_res = hj_residual<N>(f, c, metric, q, n, st, x2, r);
  out.div_res = divergence_residual<N>(f, c, metric, q, n, st);
  const double beta = std::pow(checked_chi<N>(f.chi, q), n - 2);
  out.defect = out.normalized_wave - cplx(out.hj_res, -beta * out.div_res);
  return out;
}

}  // namespace aqm
