#pragma once

// Levi-Civita connection, Riemann scalar and Weyl scalar curvature by central
// finite differences of a metric evaluator.

#include <array>
#include <cmath>
#include <utility>

#include "aqm/metrics.hpp"
#include "aqm/numerics.hpp"

namespace aqm {

// Γ^i_jk, stored as gamma[i](j, k); symmetric in (j, k) by construction.
template <int N>
struct ChristoffelAt {
  std::array<Mat<N>, N> gamma;

  double operator()(int i, int j, int k) const { return gamma[i](j, k); }

  ChristoffelAt& operator+=(const ChristoffelAt& o) {
    for (int i = 0; i < N; ++i) gamma[i] += o.gamma[i];
    return *this;
  }
  ChristoffelAt& operator-=(const ChristoffelAt& o) {
    for (int i = 0; i < N; ++i) gamma[i] -= o.gamma[i];
    return *this;
  }
  ChristoffelAt& operator*=(double s) {
    for (int i = 0; i < N; ++i) gamma[i] *= s;
    return *this;
  }
};

template <int N, class Metric>
Mat<N> metric_inverse(const Metric& metric, const Vec<N>& q) {
  return checked_inverse<N>(metric(q));
}

template <int N, class Metric>
double sqrt_abs_det(const Metric& metric, const Vec<N>& q) {
  return std::sqrt(std::abs(Mat<N>(metric(q)).determinant()));
}

template <int N, class Metric>
ChristoffelAt<N> christoffel_at(const Metric& metric, const Vec<N>& q,
                                const Stencil& st = Stencil{}) {
  if (!(st.h > 0.0)) throw DomainError("stencil step must be positive");
  const Mat<N> ginv = metric_inverse<N>(metric, q);
  const auto dg = partials<N>([&](const Vec<N>& p) { return Mat<N>(metric(p)); }, q, st.h,
                              st.order);
  ChristoffelAt<N> out;
  for (int i = 0; i < N; ++i) {
    Mat<N> gi = Mat<N>::Zero();
    for (int j = 0; j < N; ++j) {
      for (int k = j; k < N; ++k) {
        double s = 0.0;
        for (int l = 0; l < N; ++l) {
          s += ginv(i, l) * (dg[j](l, k) + dg[k](l, j) - dg[l](j, k));
        }
        gi(j, k) = gi(k, j) = 0.5 * s;
      }
    }
    out.gamma[i] = gi;
  }
  return out;
}

// R = g^jk (∂_i Γ^i_jk − ∂_j Γ^i_ik + Γ^i_ip Γ^p_jk − Γ^i_jp Γ^p_ik).
// Outer derivatives use st.h_outer, the inner connection st.h.
template <int N, class Metric>
double riemann_scalar_at(const Metric& metric, const Vec<N>& q, const Stencil& st = Stencil{}) {
  if (!(st.h > 0.0) || !(st.h_outer > 0.0)) throw DomainError("stencil step must be positive");
  const Mat<N> ginv = metric_inverse<N>(metric, q);
  const ChristoffelAt<N> gam = christoffel_at<N>(metric, q, st);
  const auto dgam = partials<N>(
      [&](const Vec<N>& p) { return christoffel_at<N>(metric, p, st); }, q, st.h_outer, st.order);

  Vec<N> trace;  // Γ^i_ip
  for (int p = 0; p < N; ++p) {
    double s = 0.0;
    for (int i = 0; i < N; ++i) s += gam.gamma[i](i, p);
    trace[p] = s;
  }

  double r = 0.0;
  for (int j = 0; j < N; ++j) {
    for (int k = 0; k < N; ++k) {
      if (ginv(j, k) == 0.0) continue;
      double ric = 0.0;
      for (int i = 0; i < N; ++i) {
        ric += dgam[i].gamma[i](j, k) - dgam[j].gamma[i](i, k);
      }
      for (int p = 0; p < N; ++p) {
        ric += trace[p] * gam.gamma[p](j, k);
        for (int i = 0; i < N; ++i) ric -= gam.gamma[i](j, p) * gam.gamma[p](i, k);
      }
      r += ginv(j, k) * ric;
    }
  }
  return r;
}

// Integrable Weyl gauge: φ_i = ∂_i χ / χ with χ > 0.
template <class Chi>
class WeylGauge {
 public:
  explicit WeylGauge(Chi chi) : chi_(std::move(chi)) {}

  template <int N>
  double chi(const Vec<N>& q) const {
    const double v = chi_(q);
    if (!(v > 0.0)) throw DomainError("Weyl pre-potential χ must be positive");
    return v;
  }

  template <int N>
  Vec<N> phi(const Vec<N>& q, const Stencil& st = Stencil{}) const {
    return gradient<N>([&](const Vec<N>& p) { return std::log(chi<N>(p)); }, q, st.h, st.order);
  }

  const Chi& field() const { return chi_; }

 private:
  Chi chi_;
};

template <class Chi>
WeylGauge(Chi) -> WeylGauge<Chi>;

// Covariant divergence (1/√|g|) ∂_k(√|g| V^k) of a vector field V(q).
template <int N, class Metric, class VectorField>
double covariant_divergence(const Metric& metric, const VectorField& v, const Vec<N>& q,
                            const Stencil& st) {
  double div = 0.0;
  for (int k = 0; k < N; ++k) {
    div += partial<N>(
        [&](const Vec<N>& p) { return sqrt_abs_det<N>(metric, p) * Vec<N>(v(p))[k]; }, q, k, st.h,
        st.order);
  }
  return div / sqrt_abs_det<N>(metric, q);
}

// Laplace-Beltrami Δf = (1/√|g|)∂_i(√|g| g^ij ∂_j f) for scalar f.
template <int N, class Metric, class F>
double laplace_beltrami(const Metric& metric, const F& f, const Vec<N>& q, const Stencil& st) {
  auto flux = [&](const Vec<N>& p) -> Vec<N> {
    return metric_inverse<N>(metric, p) * gradient<N>(f, p, st.h, st.order);
  };
  return covariant_divergence<N>(metric, flux, q, st);
}

// Ingredients of the Weyl scalar at one point, each evaluated independently:
// the potential form (φ, ∇·φ) and the pre-potential form (Δχ/χ, |∇χ|²/χ²).
struct WeylTerms {
  double ricci_scalar = 0.0;    // R
  double div_phi = 0.0;         // ∇_k φ^k
  double phi_sq = 0.0;          // φ_k φ^k
  double lap_chi_ratio = 0.0;   // ∇_k∇^k χ / χ
  double grad_chi_ratio = 0.0;  // ∇_kχ∇^kχ / χ²
  int n = 0;

  // R + 2(n−1)∇_kφ^k − (n−1)(n−2)φ_kφ^k
  double potential_form() const {
    return ricci_scalar + 2.0 * (n - 1) * div_phi - double(n - 1) * (n - 2) * phi_sq;
  }
  // R + 2(n−1)Δχ/χ − n(n−1)|∇χ|²/χ²
  double prepotential_form() const {
    return ricci_scalar + 2.0 * (n - 1) * lap_chi_ratio - double(n) * (n - 1) * grad_chi_ratio;
  }
};

template <int N, class Metric, class Chi>
WeylTerms weyl_terms(const Metric& metric, const WeylGauge<Chi>& gauge, const Vec<N>& q,
                     const Stencil& st = Stencil{}, double ricci_scalar = NAN) {
  WeylTerms t;
  t.n = N;
  t.ricci_scalar = std::isnan(ricci_scalar) ? riemann_scalar_at<N>(metric, q, st) : ricci_scalar;

  const Mat<N> ginv = metric_inverse<N>(metric, q);
  const Vec<N> phi = gauge.template phi<N>(q, st);
  t.phi_sq = phi.dot(ginv * phi);
  t.div_phi = covariant_divergence<N>(
      metric,
      [&](const Vec<N>& p) -> Vec<N> {
        return metric_inverse<N>(metric, p) * gauge.template phi<N>(p, st);
      },
      q, st);

  auto chi = [&](const Vec<N>& p) { return gauge.template chi<N>(p); };
  const double c = chi(q);
  const Vec<N> dchi = gradient<N>(chi, q, st.h, st.order);
  t.grad_chi_ratio = dchi.dot(ginv * dchi) / (c * c);
  t.lap_chi_ratio = laplace_beltrami<N>(metric, chi, q, st) / c;
  return t;
}

// Weyl scalar curvature in its potential form, with covariant divergence
// of φ^i. Requires a dimension n equal to the metric dimension.
template <int N, class Metric, class Chi>
double weyl_scalar_at(const Metric& metric, const WeylGauge<Chi>& gauge, const Vec<N>& q, int n,
                      const Stencil& st = Stencil{}) {
  if (n != N) throw DomainError("Weyl scalar dimension must match the metric dimension");
  return weyl_terms<N>(metric, gauge, q, st).potential_form();
}

// Conformal change g → ρ g together with χ → √ρ χ (φ_i → φ_i + ½∂_i ln ρ).
// Under this pair the Weyl scalar has weight −1: R_W → R_W / ρ.
template <class Chi, class Rho>
struct ScaledPrepotential {
  Chi chi;
  Rho rho;
  template <class Q>
  double operator()(const Q& q) const {
    const double r = rho(q);
    if (!(r > 0.0)) throw DomainError("conformal factor ρ must be positive");
    return std::sqrt(r) * chi(q);
  }
};

template <int N, class Metric, class Chi, class Rho>
auto conformal_transform(const Metric& metric, const WeylGauge<Chi>& gauge, const Rho& rho) {
  using NewChi = ScaledPrepotential<Chi, Rho>;
  return std::pair{ConformalMetric<N, Metric, Rho>(metric, rho),
                   WeylGauge<NewChi>(NewChi{gauge.field(), rho})};
}

}  // namespace aqm
