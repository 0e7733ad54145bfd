#include <gtest/gtest.h>

#include <cmath>

#include "support/oracles.hpp"
#include "vdwtoda/contact.hpp"
#include "vdwtoda/errors.hpp"

namespace vdwtoda {
namespace {

using testing::Sampler;
using testing::ideal;
using testing::p1;

const Observable kS = [](const PoissonPoint& q) { return q.S; };
const Observable kT = [](const PoissonPoint& q) { return q.T; };
const Observable kV = [](const PoissonPoint& q) { return q.V; };
const Observable kP = [](const PoissonPoint& q) { return q.p; };
const Observable kMinusP = [](const PoissonPoint& q) { return -q.p; };

PoissonPoint random_point(Sampler& sampler) {
  return PoissonPoint{.S = sampler.uniform(-2.0, 2.0),
                      .T = sampler.uniform(0.1, 3.0),
                      .V = sampler.uniform(0.5, 5.0),
                      .p = sampler.uniform(-1.0, 3.0)};
}

// Random quadratic in (S, T, V, p).
Observable random_quadratic(Sampler& sampler) {
  std::array<double, 15> c{};
  for (double& ci : c) ci = sampler.uniform(-1.0, 1.0);
  return [c](const PoissonPoint& q) {
    const std::array<double, 4> z{q.S, q.T, q.V, q.p};
    double value = c[0];
    for (int i = 0; i < 4; ++i) value += c[1 + i] * z[i];
    int k = 5;
    for (int i = 0; i < 4; ++i) {
      for (int j = i; j < 4 && k < 15; ++j) value += c[k++] * z[i] * z[j];
    }
    return value;
  };
}

TEST(ContactFormEnergy, WorkedValues) {
  const ContactPoint point{.U = 0.0, .S = 0.0, .V = 2.0, .T = 2.0 / 3.0, .p = 1.0 / 6.0};
  EXPECT_EQ(contact_form_energy(point, {.dU = 1.0}), 1.0);
  EXPECT_EQ(contact_form_energy(point, {.dS = 1.0}), 2.0 / 3.0);
  EXPECT_EQ(contact_form_energy(point, {.dV = 1.0}), -1.0 / 6.0);
  // dT and dp do not enter the form.
  EXPECT_EQ(contact_form_energy(point, {.dT = 5.0, .dp = -3.0}), 0.0);
}

TEST(ContactFormTransformed, WorkedValues) {
  const TransformedPoint tp = full_chain(p1(), 0.0, 2.0);
  EXPECT_NEAR(contact_form_transformed(tp, 1.0, 0.0, 0.0), 2.0 / 3.0, 1e-16);
  EXPECT_NEAR(contact_form_transformed(tp, 0.0, 1.0, 0.0), -2.0 / 3.0, 1e-16);
  EXPECT_EQ(contact_form_transformed(tp, 0.0, 0.0, 5.0), 5.0);
}

TEST(ContactForms, LinearInTangentArgument) {
  Sampler sampler(41);
  for (int i = 0; i < 100; ++i) {
    const GasParameters g = sampler.params(0.1, 5.0);
    const ExtensiveState st = sampler.state(g);
    const ContactPoint point = contact_lift(g, st);
    const TransformedPoint tp = full_chain(g, st.S, st.V);
    const TangentVector u{sampler.uniform(-1, 1), sampler.uniform(-1, 1), sampler.uniform(-1, 1), 0, 0};
    const TangentVector w{sampler.uniform(-1, 1), sampler.uniform(-1, 1), sampler.uniform(-1, 1), 0, 0};
    const double c = sampler.uniform(-3, 3);
    const TangentVector mix{u.dU + c * w.dU, u.dS + c * w.dS, u.dV + c * w.dV, 0, 0};
    const double lhs = contact_form_energy(point, mix);
    const double rhs = contact_form_energy(point, u) + c * contact_form_energy(point, w);
    EXPECT_NEAR(lhs, rhs, 1e-14 * (1.0 + std::abs(lhs)));
    const double t_lhs = contact_form_transformed(tp, u.dS + c * w.dS, u.dV + c * w.dV, u.dU + c * w.dU);
    const double t_rhs = contact_form_transformed(tp, u.dS, u.dV, u.dU) +
                         c * contact_form_transformed(tp, w.dS, w.dV, w.dU);
    EXPECT_NEAR(t_lhs, t_rhs, 1e-14 * (1.0 + std::abs(t_lhs)));
  }
}

TEST(PoissonBracket, CanonicalRelations) {
  Sampler sampler(42);
  const std::array<Observable, 4> coords{kS, kT, kV, kP};
  // Expected {z_i, z_j} for z = (S, T, V, p): {S,T} = 1, {V,p} = -1.
  const double expected[4][4] = {{0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, -1}, {0, 0, 1, 0}};
  for (int k = 0; k < 20; ++k) {
    const PoissonPoint at = random_point(sampler);
    EXPECT_NEAR(poisson_bracket(kS, kT, at, 1e-3), 1.0, 1e-10);
    EXPECT_NEAR(poisson_bracket(kV, kMinusP, at, 1e-3), 1.0, 1e-10);
    EXPECT_NEAR(poisson_bracket(kS, kV, at, 1e-3), 0.0, 1e-10);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        EXPECT_NEAR(poisson_bracket(coords[i], coords[j], at, 1e-3), expected[i][j], 1e-10);
      }
    }
  }
}

TEST(PoissonBracket, AntisymmetricAndBilinear) {
  Sampler sampler(43);
  for (int k = 0; k < 50; ++k) {
    const Observable f = random_quadratic(sampler);
    const Observable g = random_quadratic(sampler);
    const Observable u = random_quadratic(sampler);
    const double c = sampler.uniform(-2.0, 2.0);
    const PoissonPoint at = random_point(sampler);
    const double h = 1e-3;
    EXPECT_NEAR(poisson_bracket(f, g, at, h), -poisson_bracket(g, f, at, h), 1e-9);
    const Observable combo = [&](const PoissonPoint& q) { return f(q) + c * u(q); };
    EXPECT_NEAR(poisson_bracket(combo, g, at, h),
                poisson_bracket(f, g, at, h) + c * poisson_bracket(u, g, at, h), 1e-8);
    EXPECT_NEAR(poisson_bracket(f, f, at, h), 0.0, 1e-12);
  }
}

TEST(PoissonBracket, RejectsNonPositiveStep) {
  EXPECT_THROW(poisson_bracket(kS, kT, {}, 0.0), DomainError);
}

TEST(JacobiDefect, CoordinatesAndRepeatedArguments) {
  Sampler sampler(44);
  const PoissonPoint at = random_point(sampler);
  EXPECT_NEAR(jacobi_defect(kS, kT, kV, at, 1e-3), 0.0, 1e-12);
  const Observable f = random_quadratic(sampler);
  const Observable k = random_quadratic(sampler);
  EXPECT_NEAR(jacobi_defect(f, f, k, at, 1e-3), 0.0, 1e-6);
}

TEST(JacobiDefect, PolynomialTriplesBelowNestedTolerance) {
  Sampler sampler(45);
  const Observable cubic = [](const PoissonPoint& q) { return q.S * q.S * q.T + q.V * q.p * q.p; };
  const Observable mixed = [](const PoissonPoint& q) { return q.S * q.V + q.T * q.T * q.p; };
  const Observable other = [](const PoissonPoint& q) { return q.T * q.V - q.S * q.p * q.V; };
  for (int k = 0; k < 20; ++k) {
    const PoissonPoint at = random_point(sampler);
    EXPECT_LT(std::abs(jacobi_defect(cubic, mixed, other, at, 1e-3)), 1e-4);
    EXPECT_LT(std::abs(jacobi_defect(random_quadratic(sampler), random_quadratic(sampler),
                                     random_quadratic(sampler), at, 1e-3)),
              1e-4);
  }
}

TEST(PullbackDefect, WorkedPoint) {
  EXPECT_LT(pullback_defect(p1(), {0.0, 2.0}, 1.0, 0.0), 1e-7);
  EXPECT_LT(pullback_defect(p1(), {0.0, 2.0}, 0.0, 1.0), 1e-7);
  EXPECT_EQ(pullback_defect(p1(), {0.0, 2.0}, 0.0, 0.0), 0.0);
}

TEST(PullbackDefect, SmallAcrossParameterSets) {
  Sampler sampler(46);
  for (int set = 0; set < 5; ++set) {
    const GasParameters g = sampler.params(0.1, 5.0);
    for (int i = 0; i < 100; ++i) {
      const ExtensiveState st = sampler.state(g, 0.1, 10.0);
      const double dS = sampler.uniform(-1.0, 1.0);
      const double dV = sampler.uniform(-1.0, 1.0);
      EXPECT_LT(pullback_defect(g, st, dS, dV), 1e-6 * g.U0);
    }
  }
}

TEST(PullbackDefect, DomainErrors) {
  EXPECT_THROW(pullback_defect(ideal(), {0.0, 2.0}, 1.0, 0.0), ChartDomainError);
  EXPECT_THROW(pullback_defect(p1(), {0.0, 0.5}, 1.0, 0.0), DomainError);
}

TEST(IdealSubmanifold, EnergyIgnoresSecondIdealCoordinate) {
  EXPECT_LT(ideal_submanifold_check(ideal(), {0.0, 1.0}), 1e-8);
  Sampler sampler(47);
  for (int i = 0; i < 100; ++i) {
    GasParameters g = ideal_limit(sampler.params());
    const ExtensiveState st{sampler.uniform(-2.0, 2.0), sampler.uniform(0.1, 10.0)};
    EXPECT_LT(ideal_submanifold_check(g, st), 1e-8);
  }
}

TEST(IdealSubmanifold, AttractionBreaksIndependence) {
  EXPECT_GT(y_prime_sensitivity(GasParameters{.a = 0.1}, {0.0, 1.0}), 1e-4);
  EXPECT_THROW(ideal_submanifold_check(GasParameters{.a = 0.1}, {0.0, 1.0}), DomainError);
  EXPECT_THROW(ideal_submanifold_check(GasParameters{.b = 0.1}, {0.0, 1.0}), DomainError);
}

}  // namespace
}  // namespace vdwtoda
