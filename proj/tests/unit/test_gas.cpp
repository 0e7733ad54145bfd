#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support/oracles.hpp"
#include "vdwtoda/errors.hpp"
#include "vdwtoda/gas.hpp"

namespace vdwtoda {
namespace {

using testing::Sampler;
using testing::ideal;
using testing::p1;

TEST(Energy, WorkedValues) {
  EXPECT_DOUBLE_EQ(energy(ideal(), {0.0, 1.0}), 1.0);
  EXPECT_NEAR(energy(p1(), {0.0, 2.0}), 0.0, 1e-15);
  // 1.718281828459045235... from a 40-digit evaluation, and the in-test oracle.
  EXPECT_NEAR(energy(p1(), {1.5, 2.0}), 1.7182818284590452, 1e-15);
  EXPECT_NEAR(energy(p1(), {1.5, 2.0}), testing::energy_oracle(p1(), 1.5, 2.0), 1e-15);
}

TEST(Energy, MatchesHighPrecisionOracle) {
  Sampler sampler(11);
  for (int i = 0; i < 200; ++i) {
    const GasParameters g = sampler.params();
    const ExtensiveState s = sampler.state(g, 1e-3, 10.0);
    const double expected = testing::energy_oracle(g, s.S, s.V);
    const double scale = std::abs(expected) + g.a / s.V;
    EXPECT_NEAR(energy(g, s), expected, 1e-14 * scale);
  }
}

TEST(Energy, RejectsVolumeAtOrBelowCovolume) {
  EXPECT_THROW(energy(p1(), {0.0, 1.0}), DomainError);
  EXPECT_THROW(energy(p1(), {0.0, 0.5}), DomainError);
  try {
    energy(p1(), {0.0, 0.25});
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_EQ(e.field(), "V");
    EXPECT_EQ(e.value(), 0.25);
  }
}

TEST(Energy, ExponentGuardReportsOffendingExponent) {
  // 2S/(3 N kB) = 800
  try {
    energy(ideal(), {1200.0, 1.0});
    FAIL();
  } catch (const RangeError& e) {
    EXPECT_DOUBLE_EQ(e.exponent(), 800.0);
  }
  EXPECT_THROW(temperature(ideal(), {-1200.0, 1.0}), RangeError);
  EXPECT_NO_THROW(energy(ideal(), {1000.0, 1.0}));  // exponent 666.7
}

TEST(Temperature, WorkedValues) {
  EXPECT_NEAR(temperature(p1(), {0.0, 2.0}), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(temperature(ideal(), {0.0, 1.0}), 2.0 / 3.0, 1e-15);
  EXPECT_THROW(temperature(p1(), {0.0, 1.0}), DomainError);
}

TEST(Pressure, WorkedValues) {
  EXPECT_NEAR(pressure(p1(), {0.0, 2.0}), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(pressure(ideal(), {0.0, 1.0}), 2.0 / 3.0, 1e-15);
  EXPECT_THROW(pressure(p1(), {0.0, 0.9}), DomainError);
}

TEST(Momenta, MatchCentralDifferencesWithinTenHSquared) {
  Sampler sampler(12);
  const double h = 1e-3;
  for (int i = 0; i < 200; ++i) {
    const GasParameters g = sampler.params();
    const ExtensiveState s = sampler.state(g);
    const double fd_T = testing::central_difference(
        [&](double S) { return testing::energy_oracle(g, S, s.V); }, s.S, h);
    const double fd_p = -testing::central_difference(
        [&](double V) { return testing::energy_oracle(g, s.S, V); }, s.V, h);
    const ContactPoint point = contact_lift(g, s);
    EXPECT_LE(std::abs(point.T - fd_T), 10 * h * h * point.T);
    const double p_scale = std::abs(point.p) + g.a / (s.V * s.V);
    EXPECT_LE(std::abs(point.p - fd_p), 10 * h * h * p_scale);
  }
}

TEST(Momenta, FiniteDifferenceErrorIsSecondOrder) {
  const GasParameters g{.a = 1.3, .b = 0.4, .N = 1.2, .kB = 0.9, .U0 = 1.1, .V0 = 0.8};
  const ExtensiveState s{0.7, 1.9};
  const ContactPoint point = contact_lift(g, s);
  double previous_T = 0.0;
  double previous_p = 0.0;
  for (double h : {1e-1, 5e-2, 2.5e-2, 1.25e-2}) {
    const double err_T = std::abs(
        testing::central_difference([&](double S) { return testing::energy_oracle(g, S, s.V); },
                                    s.S, h) -
        point.T);
    const double err_p = std::abs(
        -testing::central_difference([&](double V) { return testing::energy_oracle(g, s.S, V); },
                                     s.V, h) -
        point.p);
    if (previous_T > 0.0) {
      EXPECT_NEAR(previous_T / err_T, 4.0, 0.1);
      EXPECT_NEAR(previous_p / err_p, 4.0, 0.2);
    }
    previous_T = err_T;
    previous_p = err_p;
  }
}

TEST(ContactLift, WorkedValues) {
  const ContactPoint q = contact_lift(p1(), {0.0, 2.0});
  EXPECT_NEAR(q.U, 0.0, 1e-15);
  EXPECT_EQ(q.S, 0.0);
  EXPECT_EQ(q.V, 2.0);
  EXPECT_NEAR(q.T, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(q.p, 1.0 / 6.0, 1e-15);

  const ContactPoint r = contact_lift(ideal(), {0.0, 1.0});
  EXPECT_DOUBLE_EQ(r.U, 1.0);
  EXPECT_NEAR(r.T, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.p, 2.0 / 3.0, 1e-15);
}

TEST(ContactLift, AgreesWithSeparateEvaluations) {
  Sampler sampler(13);
  for (int i = 0; i < 100; ++i) {
    const GasParameters g = sampler.params();
    const ExtensiveState s = sampler.state(g, 1e-3);
    const ContactPoint q = contact_lift(g, s);
    EXPECT_DOUBLE_EQ(q.U, energy(g, s));
    EXPECT_DOUBLE_EQ(q.T, temperature(g, s));
    EXPECT_DOUBLE_EQ(q.p, pressure(g, s));
    EXPECT_GT(q.T, 0.0);
  }
}

TEST(EosResidual, WorkedValues) {
  const GasParameters g = p1();
  EXPECT_NEAR(eos_residual(contact_lift(g, {0.0, 2.0}), g), 0.0, 1e-15);
  const ContactPoint off{.U = 0.0, .S = 0.0, .V = 2.0, .T = 2.0 / 3.0, .p = 1.0};
  EXPECT_NEAR(eos_residual(off, g), 5.0 / 6.0, 1e-15);
  EXPECT_THROW(eos_residual(ContactPoint{.V = 1.0}, g), DomainError);
}

TEST(EquipartitionResidual, WorkedValues) {
  EXPECT_NEAR(equipartition_residual(contact_lift(p1(), {0.0, 2.0}), p1()), 0.0, 1e-15);
  const ContactPoint bare{.U = 1.0, .S = 0.0, .V = 1.0, .T = 0.0, .p = 0.0};
  EXPECT_DOUBLE_EQ(equipartition_residual(bare, ideal()), 1.0);
  EXPECT_THROW(equipartition_residual(ContactPoint{.V = 0.0}, ideal()), DomainError);
}

TEST(Identities, HoldOnLiftedPointsAcrossParameterSpace) {
  Sampler sampler(14);
  for (int i = 0; i < 1000; ++i) {
    const GasParameters g = sampler.params();
    const ExtensiveState s{sampler.uniform(-3.0, 3.0), g.b + sampler.uniform(1e-6, 10.0)};
    const ContactPoint q = contact_lift(g, s);
    EXPECT_LE(std::abs(eos_residual(q, g)), 1e-12 * eos_scale(q, g));
    EXPECT_LE(std::abs(equipartition_residual(q, g)), 1e-12 * equipartition_scale(q, g));
  }
}

TEST(Temperature, StrictlyIncreasingInEntropy) {
  Sampler sampler(15);
  for (int i = 0; i < 50; ++i) {
    const GasParameters g = sampler.params();
    const double V = g.b + sampler.uniform(0.1, 5.0);
    double previous = 0.0;
    for (double S = -5.0; S <= 5.0; S += 0.25) {
      const double T = temperature(g, {S, V});
      EXPECT_GT(T, previous);
      previous = T;
    }
  }
}

TEST(IdealLimit, ZeroesVanDerWaalsConstants) {
  const GasParameters g = ideal_limit(p1());
  EXPECT_EQ(g, (GasParameters{.a = 0.0, .b = 0.0, .N = 1.0, .kB = 1.0, .U0 = 1.0, .V0 = 1.0}));
  EXPECT_EQ(ideal_limit(g), g);
  EXPECT_TRUE(g.is_ideal());
}

TEST(IdealLimit, EnergyReducesToIdealForm) {
  Sampler sampler(16);
  for (int i = 0; i < 100; ++i) {
    const GasParameters g = ideal_limit(sampler.params());
    const ExtensiveState s{sampler.uniform(-2.0, 2.0), sampler.uniform(0.1, 10.0)};
    const double expected =
        g.U0 * std::pow(g.V0 / s.V, 2.0 / 3.0) * std::exp(2.0 * s.S / (3.0 * g.N * g.kB));
    EXPECT_NEAR(energy(g, s), expected, 1e-14 * expected);
  }
}

TEST(IdealLimit, EnergyIsContinuousAsConstantsShrink) {
  const GasParameters full = p1();
  const ExtensiveState s{0.3, 2.5};
  const double target = energy(ideal_limit(full), s);
  double previous_gap = std::abs(energy(full, s) - target);
  for (double shrink = 0.5; shrink > 1e-8; shrink *= 0.5) {
    GasParameters g = full;
    g.a *= shrink;
    g.b *= shrink;
    const double gap = std::abs(energy(g, s) - target);
    EXPECT_LT(gap, previous_gap);
    previous_gap = gap;
  }
  EXPECT_LT(previous_gap, 1e-7);
}

TEST(GasParameters, ValidateNamesOffendingField) {
  EXPECT_NO_THROW(p1().validate());
  const auto field_of = [](GasParameters g) {
    try {
      g.validate();
    } catch (const DomainError& e) {
      return e.field();
    }
    return std::string{};
  };
  EXPECT_EQ(field_of({.a = -1.0}), "a");
  EXPECT_EQ(field_of({.b = -0.1}), "b");
  EXPECT_EQ(field_of({.N = 0.0}), "N");
  EXPECT_EQ(field_of({.kB = -1.0}), "kB");
  EXPECT_EQ(field_of({.U0 = 0.0}), "U0");
  EXPECT_EQ(field_of({.V0 = std::nan("")}), "V0");
}

}  // namespace
}  // namespace vdwtoda
