#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace aqm;
using testing_support::random_angles;
using testing_support::rng_for;

namespace {

Mat6 lie_form_metric(const Vec6& theta, double a) {
  // Oracle: in Lie coordinates the pair contraction is Σ rot² − Σ boost².
  const Mat6 mc = maurer_cartan(theta);
  const Vec6 k(1.0, 1.0, 1.0, -1.0, -1.0, -1.0);
  return a * a * mc.transpose() * k.asDiagonal() * mc;
}

}  // namespace

TEST(LorentzChart, IdentityAtOrigin) {
  const LorentzMatrix lam = lorentz_from_angles(Vec6::Zero());
  EXPECT_LT((lam.matrix() - Mat4::Identity()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(LorentzChart, GroupInvariantsOverRandomAngles) {
  auto rng = rng_for(11, 0);
  for (int k = 0; k < 1000; ++k) {
    const Vec6 t = random_angles(rng, kPi, 2.0);
    if (!in_chart(t)) continue;
    const LorentzMatrix lam = lorentz_from_angles(t);
    ASSERT_LT(lam.metric_defect(), 1e-12 * std::cosh(2.0 * t.tail<3>().norm()) * 10);
    ASSERT_NEAR(lam.matrix().determinant(), 1.0, 1e-9);
    ASSERT_GE(lam(0, 0), 1.0 - 1e-12);
    ASSERT_TRUE(lam.is_proper_orthochronous(1e-9));
  }
}

TEST(LorentzChart, SingleBoostIsHyperbolic) {
  const double eta = 0.7;
  Vec6 t = Vec6::Zero();
  t[3] = eta;
  const Mat4 m = lorentz_from_angles(t).matrix();
  EXPECT_NEAR(m(0, 0), std::cosh(eta), 1e-14);
  EXPECT_NEAR(m(0, 1), std::sinh(eta), 1e-14);
  EXPECT_NEAR(m(1, 0), std::sinh(eta), 1e-14);
  EXPECT_NEAR(m(1, 1), std::cosh(eta), 1e-14);
  EXPECT_NEAR(m(2, 2), 1.0, 1e-14);
  EXPECT_NEAR(m(3, 3), 1.0, 1e-14);
}

TEST(LorentzChart, BoostAlongOneAxisMatchesGeneralDirection) {
  // exp(η n·K) has Λ⁰_i = n_i sinh η, Λ^i_j = δ + (cosh η − 1) n_i n_j.
  const Vec3 b(0.3, -0.5, 0.9);
  const double eta = b.norm();
  const Vec3 n = b / eta;
  Vec6 t = Vec6::Zero();
  t.tail<3>() = b;
  const Mat4 m = lorentz_from_angles(t).matrix();
  EXPECT_NEAR(m(0, 0), std::cosh(eta), 1e-14);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(m(0, 1 + i), n[i] * std::sinh(eta), 1e-14);
    for (int j = 0; j < 3; ++j) {
      EXPECT_NEAR(m(1 + i, 1 + j), (i == j) + (std::cosh(eta) - 1.0) * n[i] * n[j], 1e-14);
    }
  }
}

TEST(LorentzChart, RotationAboutZ) {
  Vec6 t = Vec6::Zero();
  t[2] = 0.4;
  const Mat4 m = lorentz_from_angles(t).matrix();
  EXPECT_NEAR(m(1, 1), std::cos(0.4), 1e-15);
  EXPECT_NEAR(m(1, 2), -std::sin(0.4), 1e-15);
  EXPECT_NEAR(m(2, 1), std::sin(0.4), 1e-15);
  EXPECT_NEAR(m(3, 3), 1.0, 1e-15);
}

TEST(LorentzChart, TinyRapidityUsesSeries) {
  Vec6 t = Vec6::Zero();
  t[4] = 1e-9;
  const Mat4 m = lorentz_from_angles(t).matrix();
  EXPECT_NEAR(m(0, 2), 1e-9, 1e-22);
  EXPECT_NEAR(m(0, 0), 1.0, 1e-16);
}

TEST(LorentzChart, RapidityBeyondBoundIsRejected) {
  Vec6 t = Vec6::Zero();
  t[5] = 3.5;
  EXPECT_THROW(lorentz_from_angles(t), DomainError);
  EXPECT_NO_THROW(lorentz_from_angles(t, 4.0));
  EXPECT_FALSE(in_chart(t));
}

TEST(LorentzChart, GimbalLockIsOutsideChart) {
  Vec6 t = Vec6::Zero();
  t[1] = 0.5 * kPi;
  EXPECT_FALSE(in_chart(t));
}

TEST(LorentzChart, AnalyticPartialsMatchDifferences) {
  auto rng = rng_for(11, 1);
  for (int k = 0; k < 20; ++k) {
    const Vec6 t = random_angles(rng);
    const auto d = lorentz_partials(t);
    for (int a = 0; a < 6; ++a) {
      const Mat4 fd = partial<6>([](const Vec6& p) { return lorentz_from_angles(p).matrix(); }, t,
                                 a, 1e-3, 8);
      ASSERT_LT((fd - d[a]).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(LorentzChart, DifferenceErrorShrinksAtFourthOrder) {
  const Vec6 t(0.3, -0.2, 0.5, 0.4, 0.1, -0.3);
  const Mat4 exact = lorentz_partials(t)[4];
  auto err = [&](double h) {
    return (partial<6>([](const Vec6& p) { return lorentz_from_angles(p).matrix(); }, t, 4, h, 4) -
            exact)
        .cwiseAbs()
        .maxCoeff();
  };
  const double ratio = err(0.1) / err(0.05);
  EXPECT_GT(ratio, 13.0);
  EXPECT_LT(ratio, 19.0);
}

TEST(LieAlgebra, StructureConstantsMatchCommutators) {
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) {
      const Mat4 comm = lie_basis(a) * lie_basis(b) - lie_basis(b) * lie_basis(a);
      Mat4 expected = Mat4::Zero();
      for (int c = 0; c < 6; ++c) expected += structure_constant(a, b, c) * lie_basis(c);
      ASSERT_LT((comm - expected).cwiseAbs().maxCoeff(), 1e-15) << a << "," << b;
    }
  }
}

TEST(LieAlgebra, CoordinatesInvertBasis) {
  for (int a = 0; a < 6; ++a) {
    const Vec6 c = lie_coordinates(lie_basis(a));
    for (int b = 0; b < 6; ++b) EXPECT_EQ(c[b], a == b ? 1.0 : 0.0);
  }
}

TEST(AngularVelocity, VanishesAtRest) {
  auto rng = rng_for(11, 2);
  const AngularVelocity w = angular_velocity(random_angles(rng), Vec6::Zero());
  EXPECT_EQ(w.omega_up.cwiseAbs().maxCoeff(), 0.0);
}

TEST(AngularVelocity, FirstAngleDrivesTheYZBlock) {
  // Rx is leftmost in the chart, so θ1 motion gives ω = θ̇1 L_x at every point.
  auto rng = rng_for(11, 3);
  for (int k = 0; k < 10; ++k) {
    Vec6 dt = Vec6::Zero();
    dt[0] = 0.8;
    const AngularVelocity w = angular_velocity(random_angles(rng), dt);
    EXPECT_NEAR(w.omega_up(3, 2), 0.8, 1e-13);
    EXPECT_NEAR(w.omega_up(2, 3), -0.8, 1e-13);
    EXPECT_NEAR(std::abs(w.omega_up(0, 1)) + std::abs(w.omega_up(1, 2)) +
                    std::abs(w.omega_up(0, 3)),
                0.0, 1e-13);
    EXPECT_NEAR(pair_contraction(w), 0.64, 1e-13);
  }
}

TEST(AngularVelocity, IsAntisymmetricWithBothIndicesUp) {
  auto rng = rng_for(11, 4);
  for (int k = 0; k < 200; ++k) {
    const AngularVelocity w = angular_velocity(random_angles(rng), random_angles(rng));
    ASSERT_LT(w.antisymmetry_defect(), 1e-12);
  }
}

TEST(AngularVelocity, UnitBoostRateHasNegativeContraction) {
  Vec6 dt = Vec6::Zero();
  dt[3] = 1.0;
  EXPECT_NEAR(pair_contraction(angular_velocity(Vec6::Zero(), dt)), -1.0, 1e-15);
}

TEST(TopMetricBlock, OriginIsDiagonalWithSplitSignature) {
  const TopMetric top(1.5);
  const Mat6 b = top.angular_block(Vec6::Zero());
  const Vec6 expected(2.25, 2.25, 2.25, -2.25, -2.25, -2.25);
  EXPECT_LT((b - Mat6(expected.asDiagonal())).cwiseAbs().maxCoeff(), 1e-14);
  const Mat10 g = top(Vec10::Zero());
  const Mat4 spacetime = g.topLeftCorner<4, 4>();
  EXPECT_EQ((spacetime - minkowski()).cwiseAbs().maxCoeff(), 0.0);
  const double mixed = g.topRightCorner<4, 6>().cwiseAbs().maxCoeff();
  EXPECT_EQ(mixed, 0.0);
}

TEST(TopMetricBlock, SignatureIsPreservedAcrossTheChart) {
  auto rng = rng_for(11, 5);
  const TopMetric top(1.0);
  for (int k = 0; k < 100; ++k) {
    const Eigen::SelfAdjointEigenSolver<Mat10> es(top(testing_support::random_point(rng)));
    int neg = 0;
    for (int i = 0; i < 10; ++i) neg += es.eigenvalues()[i] < 0.0;
    ASSERT_EQ(neg, 4);
  }
}

TEST(TopMetricBlock, MatchesLieCoordinateForm) {
  auto rng = rng_for(11, 6);
  for (int k = 0; k < 100; ++k) {
    const Vec6 t = random_angles(rng);
    const TopMetric top(0.7);
    ASSERT_LT((top.angular_block(t) - lie_form_metric(t, 0.7)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(TopMetricBlock, QuadraticFormIsPairContraction) {
  auto rng = rng_for(11, 7);
  const double a = 1.3;
  const TopMetric top(a);
  for (int k = 0; k < 100; ++k) {
    const Vec6 t = random_angles(rng);
    const Vec6 dt = random_angles(rng);
    const double lhs = dt.dot(top.angular_block(t) * dt);
    const double rhs = a * a * pair_contraction(angular_velocity(t, dt));
    ASSERT_NEAR(lhs, rhs, 1e-12 * (1.0 + std::abs(rhs)));
  }
}

TEST(TopMetricBlock, ScalesWithLengthSquared) {
  const Vec6 t(0.2, 0.4, -0.1, 0.3, 0.0, 0.5);
  const Mat6 unit = TopMetric(1.0).angular_block(t);
  EXPECT_LT((TopMetric(2.0).angular_block(t) - 4.0 * unit).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(TopMetricBlock, FirstAngleEntryIsConstant) {
  auto rng = rng_for(11, 8);
  for (int k = 0; k < 50; ++k) {
    EXPECT_NEAR(TopMetric(1.0).angular_block(random_angles(rng))(0, 0), 1.0, 1e-13);
  }
}

TEST(TopMetricBlock, InverseIsAccurate) {
  auto rng = rng_for(11, 9);
  for (int k = 0; k < 100; ++k) {
    const ConfigPoint p = ConfigPoint::from_coords(testing_support::random_point(rng));
    const Mat10 prod = metric_at(p, 0.9) * inverse_metric_at(p, 0.9);
    ASSERT_LT((prod - Mat10::Identity()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(TopMetricBlock, RejectsNonPositiveLength) {
  EXPECT_THROW(TopMetric(0.0), DomainError);
  EXPECT_THROW(TopMetric(-1.0), DomainError);
}

TEST(ConfigPoint, CoordinateRoundTrip) {
  Vec10 q;
  for (int i = 0; i < 10; ++i) q[i] = 0.1 * i - 0.3;
  const ConfigPoint p = ConfigPoint::from_coords(q);
  EXPECT_EQ(p.coords(), q);
  EXPECT_EQ(p.x[2], q[2]);
  EXPECT_EQ(p.theta[0], q[4]);
}
