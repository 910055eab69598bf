#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "support.hpp"

using namespace aqm;
using testing_support::random_point;
using testing_support::rng_for;

namespace {

// Pre-potentials for the identity draws: exp of a smooth random field.
PositiveField<10> random_chi(unsigned seed, unsigned index) {
  auto rng = rng_for(seed, index);
  return PositiveField<10>::random(rng, 0.3);
}

std::vector<Vec10> points(unsigned seed, int count) {
  auto rng = rng_for(seed, 0);
  std::vector<Vec10> out;
  for (int k = 0; k < count; ++k) out.push_back(random_point(rng));
  return out;
}

}  // namespace

TEST(Christoffel, VanishOnConstantMetric) {
  const ConstantMetric<10> flat(TopMetric(1.0).operator()(Vec10::Zero()));
  const auto gam = christoffel_at<10>(flat, Vec10::Constant(0.2));
  for (int i = 0; i < 10; ++i) EXPECT_EQ(gam.gamma[i].cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(riemann_scalar_at<10>(flat, Vec10::Constant(0.2)), 0.0);
}

TEST(Christoffel, SymmetricInLowerIndices) {
  const TopMetric top(1.0);
  for (const Vec10& q : points(21, 10)) {
    const auto gam = christoffel_at<10>(top, q);
    for (int i = 0; i < 10; ++i) ASSERT_LT((gam.gamma[i] - gam.gamma[i].transpose()).norm(), 1e-14);
  }
}

TEST(Christoffel, SphereClosedForm) {
  const SphereMetric sphere(2.0);
  const Vec<2> q(0.9, 0.3);
  const auto gam = christoffel_at<2>(sphere, q);
  EXPECT_NEAR(gam(0, 1, 1), -std::sin(0.9) * std::cos(0.9), 1e-10);
  EXPECT_NEAR(gam(1, 0, 1), std::cos(0.9) / std::sin(0.9), 1e-10);
  EXPECT_NEAR(gam(1, 1, 0), std::cos(0.9) / std::sin(0.9), 1e-10);
  EXPECT_NEAR(gam(0, 0, 0), 0.0, 1e-12);
  EXPECT_NEAR(gam(1, 1, 1), 0.0, 1e-12);
}

TEST(Christoffel, RejectsNonPositiveStep) {
  Stencil st;
  st.h = 0.0;
  EXPECT_THROW(christoffel_at<2>(SphereMetric(1.0), Vec<2>(1.0, 0.0), st), DomainError);
}

TEST(RicciScalar, SphereIsTwoOverRadiusSquared) {
  for (double r : {0.5, 1.0, 3.0}) {
    const double v = riemann_scalar_at<2>(SphereMetric(r), Vec<2>(1.1, -0.4));
    EXPECT_NEAR(v, 2.0 / (r * r), 1e-6 * (2.0 / (r * r)));
  }
}

TEST(RicciScalar, TopSpaceIsSixOverLengthSquared) {
  for (double a : {0.5, 1.0, 2.0}) {
    const TopMetric top(a);
    const double expected = 6.0 / (a * a);
    const auto pts = points(22, 50);
    double sum = 0.0, lo = 1e300, hi = -1e300;
    for (const Vec10& q : pts) {
      const double r = riemann_scalar_at<10>(top, q);
      sum += r;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    EXPECT_NEAR(sum / pts.size(), expected, 1e-3 * expected) << "a=" << a;
    EXPECT_LT((hi - lo) / expected, 1e-3) << "a=" << a;
  }
}

TEST(RicciScalar, UnscaledByConstantConformalFactor) {
  const TopMetric top(1.0);
  const ConformalMetric<10, TopMetric, ConstantField<10>> scaled(top, ConstantField<10>(4.0));
  const Vec10 q = points(23, 1)[0];
  EXPECT_NEAR(riemann_scalar_at<10>(scaled, q), 6.0 / 4.0, 1e-5);
}

TEST(RicciScalar, ConvergesWithSmallerStep) {
  const TopMetric top(1.0);
  const Vec10 q = points(24, 1)[0];
  auto err = [&](double h) {
    Stencil st;
    st.h = 1e-3;
    st.h_outer = h;
    st.order = 2;
    return std::abs(riemann_scalar_at<10>(top, q, st) - 6.0);
  };
  // Second-order outer stencil: halving h reduces the error about four-fold.
  const double ratio = err(0.2) / err(0.1);
  EXPECT_GT(ratio, 3.0);
  EXPECT_LT(ratio, 5.0);
}

TEST(WeylScalar, ConstantPrepotentialGivesRiemannScalar) {
  const TopMetric top(1.0);
  const WeylGauge gauge(ConstantField<10>(2.5));
  for (const Vec10& q : points(25, 5)) {
    const WeylTerms t = weyl_terms<10>(top, gauge, q);
    EXPECT_NEAR(t.potential_form(), t.ricci_scalar, 1e-16);
    EXPECT_NEAR(t.prepotential_form(), t.ricci_scalar, 1e-16);
  }
}

TEST(WeylScalar, PotentialAndPrepotentialFormsAgree) {
  const TopMetric top(1.0);
  const auto pts = points(26, 100);
  for (unsigned k = 0; k < pts.size(); ++k) {
    const WeylGauge gauge(random_chi(26, k + 1));
    const WeylTerms t = weyl_terms<10>(top, gauge, pts[k]);
    const double l1 = t.potential_form(), l2 = t.prepotential_form();
    ASSERT_NEAR(l1, l2, 1e-6 * std::max(1.0, std::abs(l2))) << "draw " << k;
  }
}

TEST(WeylScalar, LiteralFirstLineCoefficientBreaksIdentity) {
  // With −(n−1)φ² in place of −(n−1)(n−2)φ² the two forms disagree.
  const TopMetric top(1.0);
  const Vec10 q = points(27, 1)[0];
  const WeylGauge gauge(random_chi(27, 1));
  const WeylTerms t = weyl_terms<10>(top, gauge, q);
  const double literal = t.ricci_scalar + 2.0 * 9 * t.div_phi - 9.0 * t.phi_sq;
  EXPECT_GT(std::abs(literal - t.prepotential_form()), 1e-2);
}

TEST(WeylScalar, ExponentialPrepotentialClosedForm) {
  // χ = exp(c·q) along flat directions: φ = c is constant and divergence-free
  // on the decoupled Minkowski block, so R_W − R = −(n−1)(n−2)·g^ij c_i c_j.
  const TopMetric top(1.0);
  Vec10 c = Vec10::Zero();
  c.head<4>() << 0.1, 0.3, -0.2, 0.4;
  const WeylGauge gauge(ExponentialField<10>(c, 0.2));
  const Vec10 q = points(28, 1)[0];
  const double cc = c.head<4>().dot(minkowski() * c.head<4>());
  const double r = riemann_scalar_at<10>(top, q);
  EXPECT_NEAR(weyl_scalar_at<10>(top, gauge, q, 10) - r, -72.0 * cc, 1e-7);
}

TEST(WeylScalar, DimensionMismatchRejected) {
  const WeylGauge gauge(ConstantField<10>(1.0));
  EXPECT_THROW(weyl_scalar_at<10>(TopMetric(1.0), gauge, Vec10::Zero(), 9), DomainError);
}

TEST(WeylScalar, NonPositivePrepotentialRejected) {
  const WeylGauge gauge(ConstantField<10>(-1.0));
  EXPECT_THROW(weyl_terms<10>(TopMetric(1.0), gauge, Vec10::Zero()), DomainError);
}

TEST(ConformalTransform, UnitFactorIsIdentity) {
  const TopMetric top(1.0);
  const WeylGauge gauge(random_chi(29, 1));
  const Vec10 q = points(29, 1)[0];
  const auto [g2, gauge2] = conformal_transform<10>(top, gauge, ConstantField<10>(1.0));
  EXPECT_LT((g2(q) - top(q)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(gauge2.chi<10>(q), gauge.chi<10>(q), 1e-15);
  EXPECT_NEAR(weyl_scalar_at<10>(g2, gauge2, q, 10), weyl_scalar_at<10>(top, gauge, q, 10), 1e-12);
}

TEST(ConformalTransform, PotentialShiftsByHalfLogGradient) {
  const TopMetric top(1.0);
  const WeylGauge gauge(random_chi(30, 1));
  auto rng = rng_for(30, 2);
  const PositiveField<10> rho = PositiveField<10>::random(rng, 0.3);
  const Vec10 q = points(30, 1)[0];
  const auto [g2, gauge2] = conformal_transform<10>(top, gauge, rho);
  const Vec10 dlog =
      gradient<10>([&](const Vec10& p) { return std::log(rho(p)); }, q, 1e-3, 6);
  const Vec10 shift = gauge2.phi<10>(q) - gauge.phi<10>(q);
  EXPECT_LT((shift - 0.5 * dlog).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(ConformalTransform, WeylScalarHasWeightMinusOne) {
  const TopMetric top(1.0);
  for (unsigned k = 0; k < 5; ++k) {
    const WeylGauge gauge(random_chi(31, k + 1));
    auto rng = rng_for(31, 100 + k);
    const PositiveField<10> rho = PositiveField<10>::random(rng, 0.3);
    const Vec10 q = points(31 + k, 1)[0];
    const auto [g2, gauge2] = conformal_transform<10>(top, gauge, rho);
    const double before = weyl_terms<10>(top, gauge, q).prepotential_form();
    const double after = weyl_terms<10>(g2, gauge2, q).prepotential_form();
    EXPECT_NEAR(rho(q) * after, before, 1e-5 * std::max(1.0, std::abs(before))) << k;
  }
}

TEST(ConformalTransform, LiteralPotentialRuleBreaksWeightLaw) {
  // φ → φ − ∂ ln ρ corresponds to χ → χ/ρ; the weight −1 law then fails.
  const TopMetric top(1.0);
  const WeylGauge gauge(random_chi(32, 1));
  auto rng = rng_for(32, 2);
  const PositiveField<10> rho = PositiveField<10>::random(rng, 0.3);
  const Vec10 q = points(32, 1)[0];
  const ConformalMetric<10, TopMetric, PositiveField<10>> g2(top, rho);
  const WeylGauge literal([&](const Vec10& p) { return gauge.chi<10>(p) / rho(p); });
  const double before = weyl_terms<10>(top, gauge, q).prepotential_form();
  const double after = weyl_terms<10>(g2, literal, q).prepotential_form();
  EXPECT_GT(std::abs(rho(q) * after - before), 1e-2);
}

TEST(ConformalTransform, WaveFunctionWeight) {
  // |ψ| = χ^{−(n−2)/2} and χ → √ρ χ give ψ → ρ^{−(n−2)/4} ψ.
  const Vec10 q = points(33, 1)[0];
  const PositiveField<10> chi = random_chi(33, 1);
  auto rng = rng_for(33, 2);
  const PositiveField<10> rho = PositiveField<10>::random(rng, 0.3);
  const ScaledPrepotential<PositiveField<10>, PositiveField<10>> chi2{chi, rho};
  const ConstantField<10> s(0.0);
  const double before = WaveFunction(s, chi, 10).modulus<10>(q);
  const double after = WaveFunction(s, chi2, 10).modulus<10>(q);
  EXPECT_NEAR(after / before, std::pow(rho(q), -8.0 / 4.0), 1e-12);
}

TEST(LaplaceBeltrami, SphereHarmonic) {
  // Δ cos θ = −2 cos θ / r² on the sphere of radius r.
  const SphereMetric sphere(1.5);
  const auto f = [](const Vec<2>& p) { return std::cos(p[0]); };
  Stencil st;
  const double v = laplace_beltrami<2>(sphere, f, Vec<2>(0.8, 0.1), st);
  EXPECT_NEAR(v, -2.0 * std::cos(0.8) / 2.25, 1e-8);
}
