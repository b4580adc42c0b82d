#include <gtest/gtest.h>

#include <random>

#include "kleinzone/oracle.hpp"
#include "kleinzone/specfun.hpp"
#include "kleinzone/transfer.hpp"

namespace {

using C = std::complex<double>;
using kleinzone::Model;
using kleinzone::PhysParams;
using kleinzone::PotentialProfile;

PhysParams at(double E, double U, double ell = 0.0, double L = 0.0) {
  PhysParams p;
  p.E = E;
  p.U = U;
  p.ell = ell;
  p.L = L;
  return p;
}

double max_diff(const kleinzone::StepMatrix& x, C a, C b) {
  return std::max(std::abs(x.a_value() - a), std::abs(x.b_value() - b));
}

TEST(Profile, Validation) {
  EXPECT_THROW(PotentialProfile({{0.0, 0.0}}), kleinzone::UsageError);
  EXPECT_THROW(PotentialProfile({{1.0, 0.0}, {0.0, 1.0}}), kleinzone::UsageError);
  EXPECT_THROW(PotentialProfile({{0.0, 0.0}, {0.0, 1.0}, {0.0, 2.0}}), kleinzone::UsageError);
  const auto bar = PotentialProfile::barrier(at(1.2, 3.0, 2.0, 1.0));
  EXPECT_EQ(bar.value(-10.0), 0.0);
  EXPECT_EQ(bar.value(0.0), 3.0);
  EXPECT_DOUBLE_EQ(bar.value(-2.0), 1.5);
  EXPECT_DOUBLE_EQ(bar.value(2.5), 0.75);
  EXPECT_EQ(bar.value(10.0), 0.0);
}

TEST(Integrate, FreePropagation) {
  const PotentialProfile flat({{0.0, 0.0}, {7.0, 0.0}});
  const double E = 1.7, p = std::sqrt(E * E - 1.0);
  for (Model model : {Model::Dirac, Model::KleinGordon}) {
    const auto start = kleinzone::plane_wave(p, E, 0.0, 1.0, model, 0.0);
    const auto run = kleinzone::integrate(flat, E, 1.0, model, start, {1e-12});
    const auto want = kleinzone::plane_wave(p, E, 0.0, 1.0, model, 7.0);
    EXPECT_NEAR(std::abs(run.state.psi - want.psi), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(run.state.chi - want.chi), 0.0, 1e-10);
    EXPECT_EQ(run.state.x, 7.0);
  }
}

TEST(Integrate, CurrentConserved) {
  const double tol = 1e-10;
  for (Model model : {Model::Dirac, Model::KleinGordon}) {
    const PhysParams prm = at(1.4, 3.5, 2.5, 3.0);
    const auto profile = PotentialProfile::barrier(prm);
    const double p = kleinzone::momentum_p(prm);
    const auto start = kleinzone::plane_wave(p, prm.E, 0.0, 1.0, model, profile.x_begin());
    const auto run = kleinzone::integrate(profile, prm.E, 1.0, model, start, {tol});
    EXPECT_LE(run.current_drift, 10 * tol) << kleinzone::to_string(model);
  }
}

TEST(Integrate, RejectsBadTolerance) {
  const PotentialProfile flat({{0.0, 0.0}, {1.0, 0.0}});
  EXPECT_THROW(kleinzone::integrate(flat, 1.5, 1.0, Model::Dirac, {1.0, 0.0, 0.0}, {1e-3}),
               kleinzone::UsageError);
}

TEST(NumericMatrix, RectStepMatchesClosedForm) {
  const double tol = 1e-10;
  for (Model model : {Model::Dirac, Model::KleinGordon}) {
    const PhysParams prm = at(1.3, 4.0);
    const auto nm = kleinzone::numeric_transfer_matrix(PotentialProfile::step(prm), prm.E, 1.0,
                                                       model, tol);
    const auto rect = kleinzone::rect_step_matrix(prm, model);
    EXPECT_LE(max_diff(rect, nm.a(), nm.b()), 10 * tol);
    EXPECT_LE(nm.cc_residual, 10 * tol);
  }
}

TEST(NumericMatrix, RectBarrierMatchesComposition) {
  const double tol = 1e-10;
  const PhysParams prm = at(1.2, 8.0, 0.0, 4.0);
  for (Model model : {Model::Dirac, Model::KleinGordon}) {
    const auto nm = kleinzone::numeric_transfer_matrix(PotentialProfile::barrier(prm), prm.E, 1.0,
                                                       model, tol);
    const auto bar = kleinzone::barrier_matrix(kleinzone::rect_step_matrix(prm, model), prm);
    const double scale = std::abs(bar.A_value());
    EXPECT_LE(std::abs(nm.a() - bar.A_value()) / scale, 10 * tol);
    EXPECT_LE(std::abs(nm.b() - bar.B_value()) / scale, 10 * tol);
  }
}

TEST(NumericMatrix, SauterStepMatchesClosedForm) {
  const PhysParams prm = at(1.5, 3.0, 5.0);
  const auto analytic = kleinzone::sauter_step_matrix(prm);
  const auto numeric = kleinzone::numeric_step_matrix(prm, Model::Dirac, 1e-10);
  EXPECT_EQ(numeric.engine, kleinzone::Engine::Numeric);
  EXPECT_LE(max_diff(analytic, numeric.a_value(), numeric.b_value()) /
                std::max(1.0, std::abs(analytic.a_value())),
            1e-8);
}

TEST(NumericMatrix, KleinGordonTrapezoidUnitDeterminant) {
  const double tol = 1e-10;
  const PhysParams prm = at(1.6, 3.4, 2.0, 1.5);
  const auto nm = kleinzone::numeric_transfer_matrix(PotentialProfile::barrier(prm), prm.E, 1.0,
                                                     Model::KleinGordon, tol);
  EXPECT_NEAR(std::norm(nm.a()) - std::norm(nm.b()), 1.0, 10 * tol * std::norm(nm.a()));
  EXPECT_LE(nm.cc_residual, 10 * tol);
}

TEST(NumericMatrix, NearGapWarning) {
  const PhysParams prm = at(1.5, 2.5 + 1e-9);
  const auto nm = kleinzone::numeric_transfer_matrix(PotentialProfile::step(prm), prm.E, 1.0,
                                                     Model::Dirac, 1e-10);
  EXPECT_FALSE(nm.warnings.empty());
}

TEST(Oracle, SauterBasisPropagates) {
  // (f, g) map to the Pauli-representation solution (f + ig, -f + ig).
  const PhysParams prm = at(1.5, 3.0, 3.0);
  const auto v0 = kleinzone::sauter_basis(0.0, prm);
  const C i(0.0, 1.0);
  const kleinzone::StateVector start{v0.f_value() + i * v0.g_value(),
                                     -v0.f_value() + i * v0.g_value(), 0.0};
  for (double x : {0.8, 2.1, 3.0}) {
    const PotentialProfile ramp({{0.0, 0.0}, {x, prm.U * x / prm.ell}});
    const auto run = kleinzone::integrate(ramp, prm.E, 1.0, Model::Dirac, start, {1e-12});
    const C f = 0.5 * (run.state.psi - run.state.chi);
    const C g = 0.5 * (run.state.psi + run.state.chi) / i;
    const auto want = kleinzone::sauter_basis(x, prm);
    EXPECT_LE(std::abs(f - want.f_value()), 1e-8) << x;
    EXPECT_LE(std::abs(g - want.g_value()), 1e-8) << x;
  }
}

TEST(Oracle, FixedStepConvergenceOrder) {
  const PhysParams prm = at(1.5, 3.0, 5.0);
  const auto profile = PotentialProfile::step(prm);
  const double p = kleinzone::momentum_p(prm);
  const auto start = kleinzone::plane_wave(p, prm.E, 0.0, 1.0, Model::Dirac, 0.0);
  const auto ref = kleinzone::integrate(profile, prm.E, 1.0, Model::Dirac, start, {1e-14});
  std::vector<double> err;
  for (double h : {0.4, 0.2, 0.1}) {
    kleinzone::IntegrateOptions opt;
    opt.fixed_step = h;
    const auto run = kleinzone::integrate(profile, prm.E, 1.0, Model::Dirac, start, opt);
    err.push_back(std::abs(run.state.psi - ref.state.psi) + std::abs(run.state.chi - ref.state.chi));
  }
  const double order1 = std::log2(err[0] / err[1]);
  const double order2 = std::log2(err[1] / err[2]);
  EXPECT_GE(order1, 4.7);
  EXPECT_GE(order2, 4.7);
}

TEST(Oracle, RandomSauterPointsAgree) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const double U = 2.3 + 5.0 * u(rng);
    const double E = 1.0 + (U - 2.0) * (0.05 + 0.9 * u(rng));
    const double ell = 0.2 + 9.8 * u(rng);
    const PhysParams prm = at(E, U, ell);
    const auto analytic = kleinzone::sauter_step_matrix(prm);
    const auto numeric = kleinzone::numeric_step_matrix(prm, Model::Dirac, 1e-10);
    EXPECT_LE(max_diff(analytic, numeric.a_value(), numeric.b_value()) /
                  std::max(1.0, std::abs(analytic.a_value())),
              1e-8)
        << E << " " << U << " " << ell;
  }
}

}  // namespace
