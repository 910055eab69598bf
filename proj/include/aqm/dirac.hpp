#pragma once

// Spin-1/2 sector: the coefficient equation for (u,v) = (0,1/2) ⊕ (1/2,0)
// assembled on the Dirac four-spinor, and the squared Dirac operator.
//
// Signature (−,+,+,+), ħ = c = 1. Spinor representation
//   γ⁰ = −i [[0, 1], [1, 0]],   γᵏ = i [[0, σₖ], [−σₖ, 0]],
// chosen so that (i/4)[γ^μ, γ^ν] F_μν = −(Σ·H − iα·E) with
//   Σ = diag(σ, σ),  α = diag(σ, −σ).
// In this signature the squared Dirac operator reads γ^μγ^ν π_μ π_ν + m².

#include <array>
#include <cmath>
#include <vector>

#include "aqm/errors.hpp"
#include "aqm/hj_system.hpp"
#include "aqm/lorentz_reps.hpp"
#include "aqm/numerics.hpp"

namespace aqm {

using Spinor = CVec<4>;
using CMat2 = Eigen::Matrix<cplx, 2, 2>;
using CMat4 = Eigen::Matrix<cplx, 4, 4>;

inline std::array<CMat2, 3> pauli() {
  const cplx I(0.0, 1.0);
  CMat2 x, y, z;
  x << 0, 1, 1, 0;
  y << 0, -I, I, 0;
  z << 1, 0, 0, -1;
  return {x, y, z};
}

struct BlockMatrices {
  std::array<CMat4, 3> Sigma;
  std::array<CMat4, 3> alpha;
  std::array<CMat4, 4> gamma;  // γ^μ, upper index
};

inline BlockMatrices block_matrices() {
  const cplx I(0.0, 1.0);
  const auto s = pauli();
  const CMat2 one = CMat2::Identity();
  const CMat2 zero = CMat2::Zero();
  BlockMatrices b;
  for (int k = 0; k < 3; ++k) {
    b.Sigma[k] << s[k], zero, zero, s[k];
    b.alpha[k] << s[k], zero, zero, -s[k];
    b.gamma[1 + k] << zero, I * s[k], -I * s[k], zero;
  }
  b.gamma[0] << zero, -I * one, -I * one, zero;
  return b;
}

// (i/4)[γ^μ, γ^ν]
inline CMat4 spin_tensor(const BlockMatrices& b, int mu, int nu) {
  const cplx I(0.0, 1.0);
  return 0.25 * I * (b.gamma[mu] * b.gamma[nu] - b.gamma[nu] * b.gamma[mu]);
}

struct MassScale {
  double m = 1.0;
  double a = 1.0;
  double xi = 0.0;

  // 3/(2a²)·(1 + 4ξ²)
  double curvature_mass_term() const { return 1.5 / (a * a) * (1.0 + 4.0 * xi * xi); }
};

// a = (1/m)·√(3(1 + 4ξ²)/2), ξ from the configuration dimension n.
inline MassScale mass_scale_from(double m, int n) {
  if (!(m > 0.0)) throw DomainError("mass must be positive");
  const double xi = xi_constant(n);
  return MassScale{m, std::sqrt(1.5 * (1.0 + 4.0 * xi * xi)) / m, xi};
}

struct TopSpinorOptions {
  // R_W → R_W − (ea/ξ)²·½F_μνF^μν, removing the field-quadratic scalar.
  bool counterterm = false;
};

// g^μν π_μ π_ν Ψ = −(∂_μ − ieA_μ) g^μν (∂_ν − ieA_ν) Ψ, by nested central differences.
template <class SpinorField, class Potential>
Spinor covariant_dalembertian(const SpinorField& psi, const Potential& potential, double charge,
                              const Vec4& x, const Stencil& st = Stencil{}) {
  const cplx I(0.0, 1.0);
  const Vec4 g(-1.0, 1.0, 1.0, 1.0);
  auto flux = [&](const Vec4& p, int mu) -> Spinor {
    const Spinor v = psi(p);
    const Spinor d = partial<4>([&](const Vec4& r) { return Spinor(psi(r)); }, p, mu, st.h, st.order);
    return g[mu] * (d - I * charge * Vec4(potential(p))[mu] * v);
  };
  const Vec4 a0 = potential(x);
  Spinor out = Spinor::Zero();
  for (int mu = 0; mu < 4; ++mu) {
    out += partial<4>([&](const Vec4& p) { return flux(p, mu); }, x, mu, st.h, st.order);
    out -= I * charge * a0[mu] * flux(x, mu);
  }
  return -out;
}

template <class SpinorField>
Spinor covariant_dalembertian(const SpinorField& psi, const EMConfig& em, const Vec4& x,
                              const Stencil& st = Stencil{}) {
  return covariant_dalembertian(psi, [&](const Vec4& p) { return em.potential(p); }, em.e_charge,
                                x, st);
}

// Constant 4x4 part of the coefficient equation for the Dirac spinor:
//   −(κe/2)(Σ·H − iα·E) + (κea/2)²(H² − E²) + 3/(2a²)(1 + 4ξ²).
// κ = 2 reproduces the electron case.
inline CMat4 top_spinor_matrix(const EMConfig& em, const MassScale& scale, const TopSpinorOptions& opt = {}) {
  const cplx I(0.0, 1.0);
  const BlockMatrices b = block_matrices();
  const double e = em.e_charge;
  const double half_k = 0.5 * em.kappa;
  CMat4 spin = CMat4::Zero();
  for (int k = 0; k < 3; ++k) spin += em.H[k] * b.Sigma[k] - I * em.E[k] * b.alpha[k];
  const double coupling_sq = half_k * half_k * e * e * scale.a * scale.a;
  double scalar = coupling_sq * em.invariant() + scale.curvature_mass_term();
  if (opt.counterterm) scalar -= e * e * scale.a * scale.a * em.invariant();
  return -half_k * e * spin + scalar * CMat4::Identity();
}

template <class SpinorField>
Spinor top_spinor_operator(const SpinorField& psi, const EMConfig& em, const MassScale& scale,
                     const Vec4& x, const TopSpinorOptions& opt = {}, const Stencil& st = Stencil{}) {
  return covariant_dalembertian(psi, em, x, st) + top_spinor_matrix(em, scale, opt) * Spinor(psi(x));
}

// [γ^μγ^ν π_μπ_ν + m²]Ψ with γ^μγ^ν = g^μν + ½[γ^μ,γ^ν] and
// [π_μ, π_ν] = ieF_μν: the symmetric part is the covariant d'Alembertian, the
// antisymmetric part e·(i/4)[γ^μ,γ^ν]F_μν.
template <class SpinorField>
Spinor squared_dirac_operator(const SpinorField& psi, const EMConfig& em, double m, const Vec4& x,
                     const Stencil& st = Stencil{}) {
  const BlockMatrices b = block_matrices();
  const Mat4 f = em.field_tensor();
  CMat4 spin = CMat4::Zero();
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      if (f(mu, nu) != 0.0) spin += f(mu, nu) * spin_tensor(b, mu, nu);
  const Spinor v = psi(x);
  return covariant_dalembertian(psi, em, x, st) + em.e_charge * (spin * v) + m * m * v;
}

// Literal γ^μγ^ν (π_μ π_ν Ψ) with nested differences, no algebraic split.
template <class SpinorField>
Spinor squared_dirac_literal_operator(const SpinorField& psi, const EMConfig& em, double m, const Vec4& x,
                             const Stencil& st = Stencil{}) {
  const cplx I(0.0, 1.0);
  const BlockMatrices b = block_matrices();
  const double e = em.e_charge;
  auto pi = [&](const auto& field, const Vec4& p, int mu) -> Spinor {
    const Spinor d = partial<4>([&](const Vec4& r) { return Spinor(field(r)); }, p, mu, st.h, st.order);
    return -I * d - e * em.potential(p)[mu] * Spinor(field(p));
  };
  Spinor out = Spinor::Zero();
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      auto inner = [&](const Vec4& p) { return pi(psi, p, nu); };
      out += b.gamma[mu] * (b.gamma[nu] * pi(inner, x, mu));
    }
  }
  return out + m * m * Spinor(psi(x));
}

// Plane wave w·e^{i p_μ x^μ}.
struct PlaneWaveSpinor {
  Spinor w;
  Vec4 p;  // covariant p_μ
  Spinor operator()(const Vec4& x) const { return w * std::exp(cplx(0.0, p.dot(x))); }
};

// Energy p⁰ > 0 at which the free operator annihilates a plane wave with
// spatial momentum k, found by bisection on the finite-difference operator.
// Returns the effective mass √((p⁰)² − |k|²).
inline double free_dispersion_mass(const MassScale& scale, const Vec3& k,
                                   const Stencil& st = Stencil{}) {
  const EMConfig free_field{};
  Spinor w = Spinor::Zero();
  w[0] = 1.0;
  auto symbol = [&](double p0) {
    Vec4 p;
    p << -p0, k;  // p_0 = −p⁰
    const PlaneWaveSpinor pw{w, p};
    return top_spinor_operator(pw, free_field, scale, Vec4::Zero(), {}, st)[0].real();
  };
  double lo = 0.0;
  double hi = 2.0 * std::sqrt(k.squaredNorm() + scale.curvature_mass_term()) + 1.0;
  double flo = symbol(lo);
  if (flo * symbol(hi) > 0.0) throw NumericError("dispersion root not bracketed");
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = symbol(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  const double p0 = 0.5 * (lo + hi);
  return std::sqrt(p0 * p0 - k.squaredNorm());
}

struct SpectrumRow {
  Irrep rep;
  double casimir = 0.0;
  double m2 = 0.0;
};

// m²(u,v) = c(u,v)/a² + ξ²·6/a², affine in the Casimir with slope 1/a².
inline std::vector<SpectrumRow> mass_spin_spectrum(const std::vector<Irrep>& reps, double a,
                                                   int n) {
  if (!(a > 0.0)) throw DomainError("length scale a must be positive");
  const double xi2 = xi_squared(n);
  std::vector<SpectrumRow> rows;
  rows.reserve(reps.size());
  for (const Irrep& r : reps) {
    const double c = casimir_j2_minus_k2(r);
    rows.push_back({r, c, c / (a * a) + xi2 * 6.0 / (a * a)});
  }
  return rows;
}

// ΔJ(0,½) ⊕ ΔJ(½,0), blocks ordered (undotted; dotted) as in the Dirac spinor.
inline CMat4 delta_j_dirac(const EMConfig& em, double a) {
  CMat4 out = CMat4::Zero();
  out.topLeftCorner<2, 2>() = delta_j(Irrep(0, 1), em.H, em.E, a, em.kappa, em.e_charge);
  out.bottomRightCorner<2, 2>() = delta_j(Irrep(1, 0), em.H, em.E, a, em.kappa, em.e_charge);
  return out;
}

}  // namespace aqm
