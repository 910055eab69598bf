#pragma once

// Finite-dimensional representations (u, v) of the Lorentz group: generators,
// D-matrices in the Euler chart, the Casimir J² − K², the ΔJ matrix and the
// mode expansion of a wave function on M4 x SO(3,1).
//
// Algebra map from the vector-representation basis of config_space.hpp:
//   L_a ↦ −i J_a, B_a ↦ −i K_a,
// so [J_a, J_b] = iε J_c, [J_a, K_b] = iε K_c, [K_a, K_b] = −iε J_c.
// J is Hermitian, K anti-Hermitian.

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "aqm/config_space.hpp"
#include "aqm/errors.hpp"
#include "aqm/numerics.hpp"

namespace aqm {

using CMat = Eigen::MatrixXcd;

// Irrep label stored as twice the spins so half-integers are exact.
struct Irrep {
  int two_u = 0;
  int two_v = 0;

  Irrep() = default;
  Irrep(int twice_u, int twice_v) : two_u(twice_u), two_v(twice_v) {
    if (two_u < 0 || two_v < 0) throw DomainError("irrep labels must be nonnegative");
  }
  static Irrep from_spins(double u, double v) {
    const double tu = 2.0 * u, tv = 2.0 * v;
    if (std::abs(tu - std::round(tu)) > 1e-12 || std::abs(tv - std::round(tv)) > 1e-12) {
      throw DomainError("irrep labels must be half-integers");
    }
    return Irrep(int(std::lround(tu)), int(std::lround(tv)));
  }

  double u() const { return 0.5 * two_u; }
  double v() const { return 0.5 * two_v; }
  int dim_u() const { return two_u + 1; }
  int dim_v() const { return two_v + 1; }
  int dim() const { return dim_u() * dim_v(); }
  Irrep conjugate() const { return Irrep(two_v, two_u); }

  std::string label() const {
    auto half = [](int t) { return t % 2 == 0 ? std::to_string(t / 2) : std::to_string(t) + "/2"; };
    return "(" + half(two_u) + "," + half(two_v) + ")";
  }

  friend bool operator==(const Irrep&, const Irrep&) = default;
};

struct RepGenerators {
  std::array<CMat, 3> J;
  std::array<CMat, 3> K;
};

inline CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Spin-j matrices in the |j, m⟩ basis ordered m = j, j−1, …, −j.
inline std::array<CMat, 3> su2_generators(int two_j) {
  if (two_j < 0) throw DomainError("spin must be a nonnegative half-integer");
  const int d = two_j + 1;
  const double j = 0.5 * two_j;
  CMat raise = CMat::Zero(d, d);
  CMat sz = CMat::Zero(d, d);
  for (int r = 0; r < d; ++r) {
    const double m = j - r;
    sz(r, r) = m;
    if (r > 0) raise(r - 1, r) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  const CMat lower = raise.adjoint();
  const cplx I(0.0, 1.0);
  return {0.5 * (raise + lower), -0.5 * I * (raise - lower), sz};
}

inline RepGenerators irrep_generators(const Irrep& rep) {
  const auto a = su2_generators(rep.two_u);
  const auto b = su2_generators(rep.two_v);
  const CMat iu = CMat::Identity(rep.dim_u(), rep.dim_u());
  const CMat iv = CMat::Identity(rep.dim_v(), rep.dim_v());
  const cplx I(0.0, 1.0);
  RepGenerators g;
  for (int k = 0; k < 3; ++k) {
    const CMat left = kron(a[k], iv);
    const CMat right = kron(iu, b[k]);
    g.J[k] = left + right;
    g.K[k] = -I * (left - right);
  }
  return g;
}

// Image of the so(3,1) basis element a (0..2 rotations, 3..5 boosts).
inline CMat rep_algebra(const RepGenerators& g, int a) {
  const cplx I(0.0, 1.0);
  return a < 3 ? CMat(-I * g.J[a]) : CMat(-I * g.K[a - 3]);
}

// J² − K² = c·I with c = 2[u(u+1) + v(v+1)].
inline double casimir_j2_minus_k2(const Irrep& rep) {
  const double u = rep.u(), v = rep.v();
  return 2.0 * (u * (u + 1.0) + v * (v + 1.0));
}

inline CMat casimir_matrix(const RepGenerators& g) {
  CMat c = CMat::Zero(g.J[0].rows(), g.J[0].cols());
  for (int k = 0; k < 3; ++k) c += g.J[k] * g.J[k] - g.K[k] * g.K[k];
  return c;
}

// Permutation Π: C^{2u+1} ⊗ C^{2v+1} → C^{2v+1} ⊗ C^{2u+1}. Generators of
// (v,u) are J' = Π J Πᵀ, K' = −Π K Πᵀ.
inline CMat tensor_swap(const Irrep& rep) {
  const int du = rep.dim_u(), dv = rep.dim_v();
  CMat p = CMat::Zero(rep.dim(), rep.dim());
  for (int i = 0; i < du; ++i)
    for (int j = 0; j < dv; ++j) p(j * du + i, i * dv + j) = 1.0;
  return p;
}

// D(θ) = exp(−iθ1 J1) exp(−iθ2 J2) exp(−iθ3 J3) · exp(−i θ_b·K), the image
// of the chart factorization Λ(θ) = Rx Ry Rz · exp(θ_b·B).
class DMatrixEvaluator {
 public:
  explicit DMatrixEvaluator(const Irrep& rep) : rep_(rep), gen_(irrep_generators(rep)) {}

  const Irrep& rep() const { return rep_; }
  const RepGenerators& generators() const { return gen_; }

  CMat operator()(const Vec6& theta) const {
    detail::check_angles(theta, kRapidityMax);
    const cplx I(0.0, 1.0);
    CMat boost = CMat::Zero(rep_.dim(), rep_.dim());
    for (int k = 0; k < 3; ++k) boost += theta[3 + k] * gen_.K[k];
    CMat out = CMat(-I * theta[0] * gen_.J[0]).exp();
    out = out * CMat(-I * theta[1] * gen_.J[1]).exp();
    out = out * CMat(-I * theta[2] * gen_.J[2]).exp();
    return out * CMat(-I * boost).exp();
  }

  // D(Λ⁻¹(θ)) = D(θ)⁻¹
  CMat inverse(const Vec6& theta) const { return (*this)(theta).inverse(); }

 private:
  Irrep rep_;
  RepGenerators gen_;
};

inline CMat d_matrix(const Irrep& rep, const Vec6& theta) { return DMatrixEvaluator(rep)(theta); }

// ΔJ = Σ_k [J_k/a − (κ e a/2) H_k]² − Σ_k [K_k/a − (κ e a/2) E_k]²   (ħ = c = 1)
inline CMat delta_j(const Irrep& rep, const Vec3& H, const Vec3& E, double a, double kappa,
                    double e_charge) {
  if (!(a > 0.0)) throw DomainError("length scale a must be positive");
  const RepGenerators g = irrep_generators(rep);
  const CMat id = CMat::Identity(rep.dim(), rep.dim());
  const double s = 0.5 * kappa * e_charge * a;
  CMat out = CMat::Zero(rep.dim(), rep.dim());
  for (int k = 0; k < 3; ++k) {
    const CMat m = g.J[k] / a - s * H[k] * id;
    const CMat n = g.K[k] / a - s * E[k] * id;
    out += m * m - n * n;
  }
  return out;
}

// Boost-sign flip: Λ(parity_angles(θ)) = P Λ(θ) P with P = diag(1,−1,−1,−1).
inline Vec6 parity_angles(const Vec6& theta) {
  Vec6 t = theta;
  t.tail<3>() *= -1.0;
  return t;
}

// Expansion coefficients at one space-time point: C[σ'][σ] for the (u,v)
// term and Ċ for the conjugate (v,u) term.
struct ModeCoefficients {
  CMat undotted;
  CMat dotted;
};

// ψ_uv(x, θ) = tr(D^{(u,v)}(Λ⁻¹) C(x)) + tr(D^{(v,u)}(Λ⁻¹) Ċ(x)).
// A single nonzero column of C (Ċ) fixes the top-axis (lower) index.
class ModeExpansion {
 public:
  using CoefficientField = std::function<ModeCoefficients(const Vec4&)>;

  ModeExpansion(const Irrep& rep, CoefficientField coeffs)
      : rep_(rep), undotted_(rep), dotted_(rep.conjugate()), coeffs_(std::move(coeffs)) {
    if (rep.two_u > rep.two_v) throw DomainError("mode expansion requires u ≤ v");
  }

  cplx operator()(const Vec10& q) const {
    const Vec6 theta = q.tail<6>();
    const ModeCoefficients c = coeffs_(q.head<4>());
    if (c.undotted.rows() != rep_.dim() || c.undotted.cols() != rep_.dim() ||
        c.dotted.rows() != rep_.dim() || c.dotted.cols() != rep_.dim()) {
      throw DomainError("mode coefficient shape does not match the irrep dimension");
    }
    return (undotted_.inverse(theta) * c.undotted).trace() +
           (dotted_.inverse(theta) * c.dotted).trace();
  }

  const Irrep& rep() const { return rep_; }

 private:
  Irrep rep_;
  DMatrixEvaluator undotted_;
  DMatrixEvaluator dotted_;
  CoefficientField coeffs_;
};

inline ModeExpansion mode_expand(const Irrep& rep, ModeExpansion::CoefficientField coeffs) {
  return ModeExpansion(rep, std::move(coeffs));
}

// Coefficients whose expansion at θ equals the original expansion at the
// parity image of θ: (C, Ċ) → (Πᵀ Ċ Π, Π C Πᵀ).
inline ModeCoefficients parity_partner(const Irrep& rep, const ModeCoefficients& c) {
  const CMat p = tensor_swap(rep);
  return {p.transpose() * c.dotted * p, p * c.undotted * p.transpose()};
}

// Laplace-Beltrami operator of the angular block applied to each element of
// f(θ) = D(Λ⁻¹(θ)), returned as (Δ f)·f⁻¹. For an irrep this is −(c/a²)·I.
inline CMat angular_laplacian_check(const Irrep& rep, const Vec6& theta, double a,
                                    const Stencil& st = Stencil{}) {
  if (!in_chart(theta)) throw ChartError("angles outside the regular chart");
  const TopMetric top(a);
  const DMatrixEvaluator d(rep);
  auto f = [&](const Vec6& t) { return d.inverse(t); };
  auto block = [&](const Vec6& t) { return top.angular_block(t); };

  auto flux = [&](const Vec6& t, int i) {
    const Mat6 g = block(t);
    const Mat6 ginv = checked_inverse<6>(g);
    const double vol = std::sqrt(std::abs(g.determinant()));
    const auto df = partials<6>(f, t, st.h, st.order);
    CMat out = CMat::Zero(rep.dim(), rep.dim());
    for (int j = 0; j < 6; ++j) out += ginv(i, j) * df[j];
    return CMat(vol * out);
  };

  CMat lap = CMat::Zero(rep.dim(), rep.dim());
  for (int i = 0; i < 6; ++i) {
    lap += partial<6>([&](const Vec6& t) { return flux(t, i); }, theta, i, st.h, st.order);
  }
  lap /= std::sqrt(std::abs(block(theta).determinant()));
  return lap * f(theta).inverse();
}

// Gauss-Newton recovery of chart angles from a Lorentz matrix.
inline Vec6 extract_angles(const LorentzMatrix& target, const Vec6& guess, double tol = 1e-12,
                           int max_iter = 100) {
  Vec6 theta = guess;
  auto residual = [&](const Vec6& t) {
    const Mat4 diff = lorentz_from_angles(t).matrix() - target.matrix();
    return Eigen::Map<const Eigen::Matrix<double, 16, 1>>(diff.data()).eval();
  };
  Eigen::Matrix<double, 16, 1> r = residual(theta);
  for (int it = 0; it < max_iter && r.norm() > tol; ++it) {
    const auto d = lorentz_partials(theta);
    Eigen::Matrix<double, 16, 6> jac;
    for (int a = 0; a < 6; ++a) jac.col(a) = Eigen::Map<const Eigen::Matrix<double, 16, 1>>(d[a].data());
    const Vec6 step = jac.colPivHouseholderQr().solve(-r);
    double lambda = 1.0;
    bool accepted = false;
    for (int k = 0; k < 30; ++k, lambda *= 0.5) {
      const Vec6 trial = theta + lambda * step;
      if (!in_chart(trial)) continue;
      const auto rt = residual(trial);
      if (rt.norm() < r.norm()) {
        theta = trial;
        r = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (r.norm() > 1e-10) throw NumericError("angle extraction did not converge");
  return theta;
}

inline Vec6 compose_angles(const Vec6& a, const Vec6& b) {
  const LorentzMatrix prod(lorentz_from_angles(a).matrix() * lorentz_from_angles(b).matrix());
  return extract_angles(prod, a + b);
}

// Fixed S with D^{(1/2,1/2)}(θ) S = S Λ(θ), from the least-squares null
// vector of the stacked intertwining equations at the sample angles.
inline CMat vector_intertwiner(const std::vector<Vec6>& samples) {
  const DMatrixEvaluator d(Irrep(1, 1));
  const CMat id = CMat::Identity(4, 4);
  CMat m(16 * samples.size(), 16);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const CMat dk = d(samples[k]);
    const CMat lk = lorentz_from_angles(samples[k]).matrix().cast<cplx>();
    m.block(16 * k, 0, 16, 16) = kron(id, dk) - kron(lk.transpose(), id);
  }
  Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXcd v = svd.matrixV().col(15);
  return Eigen::Map<const CMat>(v.data(), 4, 4);
}

}  // namespace aqm
