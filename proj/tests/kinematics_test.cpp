#include <gtest/gtest.h>

#include "kleinzone/kinematics.hpp"

namespace {

using kleinzone::Model;
using kleinzone::PhysParams;

PhysParams at(double E, double U, double m = 1.0) {
  PhysParams p;
  p.m = m;
  p.E = E;
  p.U = U;
  return p;
}

TEST(Kinematics, MomentumP) {
  EXPECT_EQ(kleinzone::momentum_p(at(1.0, 3.0)), 0.0);
  EXPECT_NEAR(kleinzone::momentum_p(at(0.61, 2.5, 0.51)), 0.33466, 5e-6);
  EXPECT_NEAR(kleinzone::momentum_p(at(1.2, 3.0)), 0.66332, 5e-6);
  EXPECT_THROW(kleinzone::momentum_p(at(0.9, 3.0)), kleinzone::DomainError);
}

TEST(Kinematics, MomentumQ) {
  EXPECT_EQ(kleinzone::momentum_q(at(1.5, 2.5)), 0.0);
  EXPECT_NEAR(kleinzone::momentum_q(at(0.61, 2.5, 0.51)), 1.81989, 5e-6);
  EXPECT_NEAR(kleinzone::momentum_q(at(1.2, 8.0)), 6.72607, 5e-6);
  EXPECT_THROW(kleinzone::momentum_q(at(1.5, 2.0)), kleinzone::DomainError);
}

TEST(Kinematics, KleinZone) {
  EXPECT_TRUE(kleinzone::in_klein_zone(at(1.2, 3.0)));
  EXPECT_FALSE(kleinzone::in_klein_zone(at(1.0, 3.0)));
  EXPECT_FALSE(kleinzone::in_klein_zone(at(2.0, 3.0)));
  EXPECT_FALSE(kleinzone::in_klein_zone(at(1.5, 2.4)));
  EXPECT_THROW(kleinzone::require_klein_zone(at(1.0, 3.0)), kleinzone::BoundaryError);
  EXPECT_THROW(kleinzone::require_klein_zone(at(2.0, 3.0)), kleinzone::BoundaryError);
  EXPECT_THROW(kleinzone::require_klein_zone(at(1.5, 2.4)), kleinzone::DomainError);
}

TEST(Kinematics, DRatio) {
  EXPECT_EQ(kleinzone::d_ratio(at(1.2, 3.0), Model::KleinGordon), 1.0);
  EXPECT_NEAR(kleinzone::d_ratio(at(1.2, 3.0), Model::Dirac), -0.36364, 5e-6);
  EXPECT_EQ(kleinzone::d_ratio(at(1.5, 2.5), Model::Dirac), 0.0);
}

TEST(Kinematics, Spinors) {
  const PhysParams prm = at(1.2, 3.0);
  const double p = kleinzone::momentum_p(prm);
  const double q = kleinzone::momentum_q(prm);
  auto kg = kleinzone::spinor(p, prm, Model::KleinGordon, kleinzone::Region::Free);
  EXPECT_EQ(kg.upper, std::complex<double>(1.0));
  EXPECT_EQ(kg.lower, std::complex<double>(0.0, p));
  auto d = kleinzone::spinor(-p, prm, Model::Dirac, kleinzone::Region::Free);
  EXPECT_DOUBLE_EQ(d.lower.real(), -p / 2.2);
  auto ds = kleinzone::spinor(q, prm, Model::Dirac, kleinzone::Region::Shifted);
  EXPECT_DOUBLE_EQ(ds.lower.real(), q / (1.2 - 3.0 + 1.0));
  EXPECT_THROW(kleinzone::spinor(q, at(1.5, 2.5), Model::Dirac, kleinzone::Region::Shifted),
               kleinzone::SingularError);
}

TEST(Kinematics, ZoneInvariantsOnGrid) {
  int samples = 0;
  for (int i = 0; i < 40; ++i) {
    const double U = 2.05 + 0.5 * i;
    double prev_p = -1.0, prev_q = 1e300;
    for (int j = 1; j < 40; ++j) {
      const double E = 1.0 + (U - 2.0) * j / 40.0;
      const PhysParams prm = at(E, U);
      ASSERT_TRUE(kleinzone::in_klein_zone(prm));
      const double p = kleinzone::momentum_p(prm);
      const double q = kleinzone::momentum_q(prm);
      EXPECT_GT(p, 0.0);
      EXPECT_GT(q, 0.0);
      EXPECT_GT(p, prev_p);
      EXPECT_LT(q, prev_q);
      EXPECT_LT(kleinzone::d_ratio(prm, Model::Dirac), 0.0);
      prev_p = p;
      prev_q = q;
      ++samples;
    }
  }
  EXPECT_GE(samples, 1000);
}

TEST(Kinematics, WideMomentaAgree) {
  const PhysParams prm = at(1.2, 3.0);
  auto w = kleinzone::detail::momenta<kleinzone::num::MultiDouble<2>>(prm, Model::Dirac);
  EXPECT_NEAR(w.p.to_double(), kleinzone::momentum_p(prm), 1e-15);
  EXPECT_NEAR(w.det.to_double(), -0.16116, 5e-6);
}

}  // namespace
