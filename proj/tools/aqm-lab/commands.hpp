#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <vector>

#include "config.hpp"
#include "draws.hpp"
#include "report.hpp"

namespace aqm::lab {

namespace detail {

inline double max_abs(const CMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline json vec_json(const Vec10& q) {
  json a = json::array();
  for (int i = 0; i < q.size(); ++i) a.push_back(q[i]);
  return a;
}

// Reps with u ≤ v up to the given doubled spin, in (two_v, two_u) order.
inline std::vector<Irrep> ordered_reps(int max_two_spin) {
  std::vector<Irrep> out;
  for (int tv = 0; tv <= max_two_spin; ++tv)
    for (int tu = 0; tu <= tv; ++tu) out.emplace_back(tu, tv);
  return out;
}

inline std::vector<Irrep> reps_up_to_dim(int dim) {
  std::vector<Irrep> out;
  for (int tu = 0; tu < dim; ++tu)
    for (int tv = 0; tv < dim; ++tv)
      if ((tu + 1) * (tv + 1) <= dim) out.emplace_back(tu, tv);
  return out;
}

// Worst deviation of the defining brackets
// [J_a,J_b] = iε J_c, [J_a,K_b] = iε K_c, [K_a,K_b] = −iε J_c.
inline double commutator_residual(const Irrep& rep) {
  const cplx i(0.0, 1.0);
  const RepGenerators g = irrep_generators(rep);
  auto comm = [](const CMat& x, const CMat& y) { return CMat(x * y - y * x); };
  double worst = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      CMat jj = CMat::Zero(rep.dim(), rep.dim()), jk = jj, kk = jj;
      for (int c = 0; c < 3; ++c) {
        const double e = levi_civita(a, b, c);
        jj += i * e * g.J[c];
        jk += i * e * g.K[c];
        kk -= i * e * g.J[c];
      }
      worst = std::max({worst, max_abs(comm(g.J[a], g.J[b]) - jj),
                        max_abs(comm(g.J[a], g.K[b]) - jk), max_abs(comm(g.K[a], g.K[b]) - kk)});
    }
  return worst;
}

struct SeparationResult {
  double residual = 0.0;  // max |(ΔD)D⁻¹ + (c/a²)I|
  double spread = 0.0;    // max over θ of |L(θ) − L(θ₀)|
};

inline SeparationResult laplacian_separation(const Irrep& rep, double a, const Stencil& st,
                                             std::uint64_t seed, int points) {
  const double c = casimir_j2_minus_k2(rep);
  const CMat target = -(c / (a * a)) * CMat::Identity(rep.dim(), rep.dim());
  SeparationResult out;
  CMat first;
  for (int k = 0; k < points; ++k) {
    auto rng = rng_for(seed, 3000 + k);
    const CMat l = angular_laplacian_check(rep, random_angles(rng), a, st);
    out.residual = std::max(out.residual, max_abs(l - target));
    if (k == 0) first = l;
    out.spread = std::max(out.spread, max_abs(l - first));
  }
  return out;
}

inline json spectrum_json(const std::vector<SpectrumRow>& rows) {
  json arr = json::array();
  for (const SpectrumRow& r : rows) {
    arr.push_back(json{{"rep", r.rep.label()},
                       {"u", r.rep.two_u / 2.0},
                       {"v", r.rep.two_v / 2.0},
                       {"casimir", r.casimir},
                       {"m2", r.m2}});
  }
  return arr;
}

inline Check closure_check(double a) {
  const double xi2 = xi_squared(kConfigDim);
  const double lhs = 1.5 / (a * a) + xi2 * 6.0 / (a * a);
  const double rhs = 1.5 / (a * a) * (1.0 + 4.0 * xi2);
  return within("mass_term_closure", lhs, rhs, 1e-14);
}

}  // namespace detail

inline Report cmd_verify_curvature(const RunConfig& cfg) {
  const double a = a_of(cfg), tol = tol_of(cfg);
  const int n = points_of(cfg);
  const TopMetric top(a);
  const double expected = 6.0 / (a * a);
  double sum = 0.0, lo = std::numeric_limits<double>::infinity(), hi = -lo, worst = 0.0;
  json samples = json::array();
  for (int k = 0; k < n; ++k) {
    auto rng = rng_for(cfg.seed, k);
    const Vec10 q = random_point(rng);
    const double r = riemann_scalar_at<10>(top, q, cfg.stencil());
    sum += r;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    worst = std::max(worst, std::abs(r - expected) / expected);
    samples.push_back(json{{"point", detail::vec_json(q)}, {"R", r}});
  }
  const double mean = sum / n;
  Report rep;
  rep.checks.push_back(within("ricci_mean", mean, expected, tol * expected));
  rep.checks.push_back(within("ricci_max_relative_error", worst, 0.0, tol));
  rep.checks.push_back(within("ricci_relative_spread", (hi - lo) / expected, 0.0, tol));
  rep.data = json{{"expected", expected}, {"mean", mean}, {"min", lo}, {"max", hi},
                  {"samples", samples}};
  return rep;
}

inline Report cmd_verify_weyl(const RunConfig& cfg) {
  const double a = a_of(cfg), tol = tol_of(cfg);
  const int n = draws_of(cfg);
  const TopMetric top(a);
  const Stencil st = cfg.stencil();
  double worst = 0.0;
  int literal_detected = 0;
  for (int k = 0; k < n; ++k) {
    auto rng = rng_for(cfg.seed, k);
    const Vec10 q = random_point(rng);
    const WeylGauge gauge(PositiveField<10>::random(rng, 0.3));
    const WeylTerms t = weyl_terms<10>(top, gauge, q, st);
    const double l1 = t.potential_form(), l2 = t.prepotential_form();
    const double scale = std::max(1.0, std::abs(l2));
    worst = std::max(worst, std::abs(l1 - l2) / scale);
    // The first line with −(n−1)φ² in place of −(n−1)(n−2)φ².
    const int nm1 = kConfigDim - 1;
    const double literal = t.ricci_scalar + 2.0 * nm1 * t.div_phi - nm1 * t.phi_sq;
    if (std::abs(literal - l2) / scale > 1e-2) ++literal_detected;
  }

  // g → ρg with χ → √ρ·χ scales the Weyl scalar by 1/ρ.
  double weight = 0.0;
  const int weight_draws = std::min(n, 5);
  for (int k = 0; k < weight_draws; ++k) {
    auto rng = rng_for(cfg.seed, 5000 + k);
    const Vec10 q = random_point(rng);
    const WeylGauge gauge(PositiveField<10>::random(rng, 0.3));
    const PositiveField<10> rho = PositiveField<10>::random(rng, 0.3);
    const auto [g2, gauge2] = conformal_transform<10>(top, gauge, rho);
    const double before = weyl_terms<10>(top, gauge, q, st).prepotential_form();
    const double after = weyl_terms<10>(g2, gauge2, q, st).prepotential_form();
    weight = std::max(weight, std::abs(rho(q) * after - before) / std::max(1.0, std::abs(before)));
  }

  Report rep;
  rep.checks.push_back(within("forms_max_relative_difference", worst, 0.0, tol));
  rep.checks.push_back(within("conformal_weight_max_relative", weight, 0.0, 1e-5));
  rep.checks.push_back(
      above("control_literal_coefficient_detected_fraction", double(literal_detected) / n, 0.9));
  return rep;
}

inline Report cmd_verify_linearization(const RunConfig& cfg) {
  const double a = a_of(cfg), tol = tol_of(cfg);
  const int n = draws_of(cfg);
  const TopMetric top(a);
  const Stencil st = cfg.stencil();

  EMConfig em = cfg.em();
  const bool seeded_em = cfg.H.isZero(0.0) && cfg.E.isZero(0.0);
  if (seeded_em) {
    auto rng = rng_for(cfg.seed, 1u << 20);
    em.H = random_vec3(rng, 0.5);
    em.E = random_vec3(rng, 0.5);
  }
  const auto coupled = em_coupling(em, a);

  double free_worst = 0.0, em_worst = 0.0;
  double control_min = std::numeric_limits<double>::infinity();
  json records = json::array();
  auto record = [&](int k, const char* kind, const Vec10& q, const LinearizationResult& r) {
    records.push_back(json{{"seed", cfg.seed},
                           {"draw", k},
                           {"kind", kind},
                           {"point", detail::vec_json(q)},
                           {"hj_res", r.hj_res},
                           {"div_res", r.div_res},
                           {"defect_re", r.defect.real()},
                           {"defect_im", r.defect.imag()}});
  };
  for (int k = 0; k < n; ++k) {
    const LinearizationDraw d = linearization_draw(cfg.seed, k);
    const ScalarFieldPair f{d.s, d.chi};
    const auto r0 = linearization_check<10>(f, uncoupled<10>(), top, d.q, kConfigDim, st);
    const auto r1 = linearization_check<10>(f, coupled, top, d.q, kConfigDim, st);
    const auto rc = linearization_check<10>(f, uncoupled<10>(), top, d.q, kConfigDim, st, 0.25);
    free_worst = std::max(free_worst, std::abs(r0.defect));
    em_worst = std::max(em_worst, std::abs(r1.defect));
    control_min = std::min(control_min, std::abs(rc.defect));
    record(k, "free", d.q, r0);
    record(k, "em", d.q, r1);
    record(k, "control_xi2_0.25", d.q, rc);
  }

  Report rep;
  rep.checks.push_back(within("defect_max_free", free_worst, 0.0, tol));
  rep.checks.push_back(within("defect_max_em", em_worst, 0.0, tol));
  rep.checks.push_back(above("control_xi2_0.25_min_defect", control_min, 1e-2));
  rep.data = json{{"xi2", xi_squared(kConfigDim)},
                  {"em_source", seeded_em ? "seeded" : "config"},
                  {"em_H", {em.H[0], em.H[1], em.H[2]}},
                  {"em_E", {em.E[0], em.E[1], em.E[2]}},
                  {"records", records}};
  return rep;
}

inline Report cmd_verify_reps(const RunConfig& cfg) {
  const double a = a_of(cfg), tol = tol_of(cfg);
  const Stencil st = cfg.stencil();
  Report rep;

  double comm = 0.0, conj = 0.0;
  const auto small = detail::reps_up_to_dim(9);
  for (const Irrep& r : small) comm = std::max(comm, detail::commutator_residual(r));
  for (std::size_t j = 0; j < small.size(); ++j) {
    const Irrep& r = small[j];
    const CMat p = tensor_swap(r);
    for (int k = 0; k < 3; ++k) {
      auto rng = rng_for(cfg.seed, 100 * j + k);
      const Vec6 t = random_angles(rng);
      const CMat lhs = d_matrix(r, t).adjoint();
      const CMat rhs = p.transpose() * d_matrix(r.conjugate(), t).inverse() * p;
      conj = std::max(conj, detail::max_abs(lhs - rhs));
    }
  }
  rep.checks.push_back(within("commutators_max_dim9", comm, 0.0, 1e-12));
  rep.checks.push_back(within("d_matrix_conjugation_max", conj, 0.0, 1e-10));

  std::vector<Irrep> lap = {Irrep(0, 1), Irrep(1, 1)};
  if (std::find(lap.begin(), lap.end(), cfg.rep) == lap.end()) lap.push_back(cfg.rep);
  for (const Irrep& r : lap) {
    const auto s = detail::laplacian_separation(r, a, st, cfg.seed, points_of(cfg));
    rep.checks.push_back(within("laplacian_separation_" + r.label(), s.residual, 0.0, tol));
    rep.checks.push_back(within("laplacian_theta_spread_" + r.label(), s.spread, 0.0, tol));
  }

  const RepGenerators g = irrep_generators(cfg.rep);
  const double c = casimir_j2_minus_k2(cfg.rep);
  const double cas =
      detail::max_abs(casimir_matrix(g) - c * CMat::Identity(cfg.rep.dim(), cfg.rep.dim()));
  rep.checks.push_back(within("casimir_matrix_" + cfg.rep.label(), cas, 0.0, 1e-12));
  rep.data = json{{"reps_checked", small.size()}, {"casimir", c}};
  return rep;
}

inline Report cmd_verify_dirac(const RunConfig& cfg) {
  const double tol = tol_of(cfg);
  MassScale s = mass_scale_from(cfg.mass, kConfigDim);
  const double derived_a = s.a;
  s.a = a_of(cfg);
  const double a = s.a;
  const Stencil st = cfg.stencil();
  Report rep;

  const BlockMatrices b = block_matrices();
  const Vec4 metric(-1, 1, 1, 1);
  double cliff = 0.0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      const CMat4 anti = b.gamma[mu] * b.gamma[nu] + b.gamma[nu] * b.gamma[mu];
      const CMat4 expect = (mu == nu ? 2.0 * metric[mu] : 0.0) * CMat4::Identity();
      cliff = std::max(cliff, (anti - expect).cwiseAbs().maxCoeff());
    }
  rep.checks.push_back(within("clifford_max", cliff, 0.0, 1e-14));
  rep.checks.push_back(within("mass_scale_a", a, derived_a, 1e-14 * derived_a));
  rep.checks.push_back(detail::closure_check(a));

  double diff_worst = 0.0, ct_worst = 0.0;
  for (int k = 0; k < draws_of(cfg); ++k) {
    auto rng = rng_for(cfg.seed, k);
    EMConfig em = cfg.em();
    em.H = random_vec3(rng, 0.6);
    em.E = random_vec3(rng, 0.6);
    const SmoothSpinor psi = random_spinor(rng);
    const Vec4 x = random_event(rng);
    const Spinor dirac_sq = squared_dirac_operator(psi, em, s.m, x, st);
    const Spinor diff = top_spinor_operator(psi, em, s, x, {}, st) - dirac_sq;
    const double e = em.e_charge;
    const Spinor expected = e * e * a * a * em.invariant() * psi(x);
    diff_worst = std::max(diff_worst, (diff - expected).cwiseAbs().maxCoeff());
    const Spinor ct = top_spinor_operator(psi, em, s, x, TopSpinorOptions{true}, st) - dirac_sq;
    ct_worst = std::max(ct_worst, ct.cwiseAbs().maxCoeff());
  }
  rep.checks.push_back(within("top_minus_dirac_max_residual", diff_worst, 0.0, tol));
  rep.checks.push_back(within("counterterm_residual_max", ct_worst, 0.0, 1e-12));

  // The configured field: the difference is a scalar multiple of Ψ.
  const EMConfig em = cfg.em();
  {
    auto rng = rng_for(cfg.seed, 7000);
    const SmoothSpinor psi = random_spinor(rng);
    const Vec4 x = random_event(rng);
    const Spinor v = psi(x);
    const Spinor diff = top_spinor_operator(psi, em, s, x, TopSpinorOptions{cfg.counterterm}, st) -
                        squared_dirac_operator(psi, em, s.m, x, st);
    const double ratio = (v.dot(diff) / v.squaredNorm()).real();
    const double expected = cfg.counterterm ? 0.0 : em.e_charge * em.e_charge * a * a * em.invariant();
    rep.checks.push_back(
        within("top_minus_dirac_configured_field", ratio, expected, tol * std::max(1.0, std::abs(expected))));
  }

  const CMat4 m18 = top_spinor_matrix(em, s);
  const CMat4 assembled = delta_j_dirac(em, a) + xi_squared(kConfigDim) * 6.0 / (a * a) * CMat4::Identity();
  rep.checks.push_back(
      within("top_spinor_matrix_vs_delta_j", (m18 - assembled).cwiseAbs().maxCoeff(), 0.0, 1e-12));

  double disp = 0.0;
  for (const Vec3& k : {Vec3(0, 0, 0), Vec3(0.3, -0.2, 0.1), Vec3(1.0, 0.5, -0.5)}) {
    disp = std::max(disp, std::abs(free_dispersion_mass(s, k, st) - cfg.mass) / cfg.mass);
  }
  rep.checks.push_back(within("dispersion_mass_max_relative", disp, 0.0, 1e-8));

  const auto sep = detail::laplacian_separation(Irrep(0, 1), a, st, cfg.seed, 5);
  rep.checks.push_back(within("laplacian_separation_(0,1/2)", sep.residual, 0.0, 1e-3));

  const Eigen::SelfAdjointEigenSolver<CMat4> es(top_spinor_matrix(em, s, TopSpinorOptions{cfg.counterterm}));
  json eig = json::array();
  for (int k = 0; k < 4; ++k) eig.push_back(es.eigenvalues()[k]);
  if (em.E.isZero(0.0) && !em.H.isZero(0.0)) {
    // Pure magnetic field: eigenvalues split symmetrically by (κe/2)|H|.
    const double half_split = 0.5 * (es.eigenvalues()[3] - es.eigenvalues()[0]);
    const double expected = 0.5 * std::abs(em.kappa * em.e_charge) * em.H.norm();
    rep.checks.push_back(within("zeeman_half_splitting", half_split, expected, 1e-12));
  }

  rep.data = json{{"a", a},
                  {"xi2", xi_squared(kConfigDim)},
                  {"top_spinor_eigenvalues", eig},
                  {"spectrum", detail::spectrum_json(mass_spin_spectrum(
                                   detail::ordered_reps(cfg.max_two_spin), a, kConfigDim))}};
  return rep;
}

inline void write_trajectory_csv(const Trajectory<10>& t, std::ostream& os) {
  os << "s,x0,x1,x2,x3,th1,th2,th3,th4,th5,th6,timelike_flag\n";
  for (const auto& smp : t.samples) {
    os << format_double(smp.s);
    for (int i = 0; i < 10; ++i) os << ',' << format_double(smp.q[i]);
    os << ',' << (smp.timelike ? 1 : 0) << '\n';
  }
}

inline Report cmd_trace(const RunConfig& cfg) {
  const double a = a_of(cfg), tol = tol_of(cfg);
  const TopMetric top(a);
  const Stencil st = cfg.stencil();

  const Vec3 k(0.3, -0.1, 0.2);
  Vec10 p = Vec10::Zero();
  p[0] = cfg.null_momentum ? -k.norm() : -std::sqrt(cfg.mass * cfg.mass + k.squaredNorm());
  p.segment<3>(1) = k;
  const LinearField<10> action(p);

  BundleSpec<10, LinearField<10>, ConstantField<10>, ZeroPotential<10>> bundle{
      {action, ConstantField<10>(1.0)}, uncoupled<10>(), {}, cfg.steps, cfg.ds};
  for (int j = 0; j < points_of(cfg); ++j) {
    auto rng = rng_for(cfg.seed, j);
    bundle.seeds.push_back(random_point(rng, 0.5, 0.5));
  }
  const TransportReport<10> tr = transport_check<10>(bundle, top, kConfigDim, st);

  double straight = 0.0;
  int alive = 0;
  json summary = json::array();
  for (std::size_t j = 0; j < tr.trajectories.size(); ++j) {
    const auto& t = tr.trajectories[j];
    summary.push_back(json{{"index", j},
                           {"samples", t.samples.size()},
                           {"truncated", t.truncated},
                           {"reason", t.truncation_reason}});
    if (t.truncated || t.samples.empty()) continue;
    ++alive;
    const Vec10 q0 = t.samples.front().q;
    const Vec10 v0 = velocity_field<10>(action, uncoupled<10>(), top, q0, st).v;
    for (const auto& smp : t.samples) straight = std::max(straight, (smp.q - q0 - smp.s * v0).norm());
  }

  if (!cfg.trajectories.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.trajectories, ec);
    if (ec) throw ConfigError("cannot create trajectory directory '" + cfg.trajectories + "'");
    for (std::size_t j = 0; j < tr.trajectories.size(); ++j) {
      std::string index = std::to_string(j);
      index.insert(0, index.size() < 3 ? 3 - index.size() : 0, '0');
      std::ofstream os(std::filesystem::path(cfg.trajectories) / ("trajectory_" + index + ".csv"));
      if (!os) throw ConfigError("cannot write into '" + cfg.trajectories + "'");
      write_trajectory_csv(tr.trajectories[j], os);
    }
  }

  Report rep;
  rep.checks.push_back(within("current_divergence_max", tr.max_divergence, 0.0, 1e-6));
  rep.checks.push_back(within("flux_drift_max", tr.max_flux_drift, 0.0, tol));
  rep.checks.push_back(within("velocity_norm_defect_max", tr.max_norm_defect, 0.0, 1e-10));
  rep.checks.push_back(within("straightness_max", straight, 0.0, 1e-8));
  // Separation is only meaningful with two or more surviving trajectories.
  if (alive >= 2) rep.checks.push_back(above("min_pair_distance", tr.min_pair_distance, 0.0));
  rep.data = json{{"momentum", detail::vec_json(p)},
                  {"truncated", tr.truncated},
                  {"surviving", alive},
                  {"trajectories", summary}};
  return rep;
}

inline std::vector<SpectrumRow> spectrum_rows(const RunConfig& cfg) {
  return mass_spin_spectrum(detail::ordered_reps(cfg.max_two_spin), a_of(cfg), kConfigDim);
}

inline Report cmd_spectrum(const RunConfig& cfg) {
  const double a = a_of(cfg), tol = tol_of(cfg);
  const auto rows = spectrum_rows(cfg);

  // Least-squares line m² = α·c + β through the table.
  double sc = 0, sm = 0, scc = 0, scm = 0;
  for (const auto& r : rows) {
    sc += r.casimir;
    sm += r.m2;
    scc += r.casimir * r.casimir;
    scm += r.casimir * r.m2;
  }
  const double n = rows.size();
  const double slope = (n * scm - sc * sm) / (n * scc - sc * sc);
  const double intercept = (sm - slope * sc) / n;

  // Casimir values re-derived from the generators, independent of the formula.
  double cas = 0.0;
  for (const auto& r : rows) {
    const CMat c = casimir_matrix(irrep_generators(r.rep));
    cas = std::max(cas, detail::max_abs(c - r.casimir * CMat::Identity(r.rep.dim(), r.rep.dim())));
  }

  Report rep;
  const double inv_a2 = 1.0 / (a * a);
  rep.checks.push_back(within("affine_slope", slope, inv_a2, tol * inv_a2));
  rep.checks.push_back(
      within("affine_intercept", intercept, xi_squared(kConfigDim) * 6.0 * inv_a2, tol * inv_a2));
  rep.checks.push_back(within("casimir_from_generators_max", cas, 0.0, 1e-12));
  rep.checks.push_back(detail::closure_check(a));
  const auto spinor = mass_spin_spectrum({Irrep(0, 1)}, a, kConfigDim).front();
  rep.checks.push_back(within("weyl_spinor_m2", spinor.m2, 1.5 * inv_a2 * (1.0 + 4.0 * xi_squared(kConfigDim)),
                              1e-14 * std::max(1.0, spinor.m2)));
  rep.data = json{{"a", a}, {"spectrum", detail::spectrum_json(rows)}};
  return rep;
}

inline void write_spectrum_csv(const std::vector<SpectrumRow>& rows, std::ostream& os) {
  os << "u,v,casimir,m2\n";
  for (const auto& r : rows) {
    os << format_double(r.rep.two_u / 2.0) << ',' << format_double(r.rep.two_v / 2.0) << ','
       << format_double(r.casimir) << ',' << format_double(r.m2) << '\n';
  }
}

inline Report run_command(const RunConfig& cfg) {
  Report rep;
  if (cfg.command == "verify-curvature") rep = cmd_verify_curvature(cfg);
  else if (cfg.command == "verify-weyl") rep = cmd_verify_weyl(cfg);
  else if (cfg.command == "verify-linearization") rep = cmd_verify_linearization(cfg);
  else if (cfg.command == "verify-reps") rep = cmd_verify_reps(cfg);
  else if (cfg.command == "verify-dirac") rep = cmd_verify_dirac(cfg);
  else if (cfg.command == "trace") rep = cmd_trace(cfg);
  else if (cfg.command == "spectrum") rep = cmd_spectrum(cfg);
  else throw ConfigError("unknown command '" + cfg.command + "'");
  rep.command = cfg.command;
  rep.config = echo(cfg);
  rep.sort_checks();
  return rep;
}

}  // namespace aqm::lab
