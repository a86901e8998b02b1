// Copyright 2026 The qlight Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "generators.hpp"
#include "qlight/device.hpp"

namespace qlight {
namespace {

constexpr double kMHz = kTwoPi;  // rad/us per MHz

TEST(Squid, InductanceAtSpecialFluxes) {
  const SquidResonatorParams p;
  EXPECT_DOUBLE_EQ(squid_inductance(p, 0.0), p.lj0_h);
  EXPECT_NEAR(squid_inductance(p, 1.0 / 3.0), 2.0 * p.lj0_h, 1e-24);
  EXPECT_THROW(squid_inductance(p, 0.5), NumericalError);
  EXPECT_THROW(squid_inductance(p, -1.5), NumericalError);
}

TEST(Squid, SweetSpotIsTheMaximum) {
  const SquidResonatorParams p;
  const double f0 = resonance_frequency(p, 0.0);
  EXPECT_NEAR(f0, p.sweet_spot_ghz * 1e9, 1.0);
  gen::Engine rng(1);
  for (int i = 0; i < 100; ++i) {
    const double phi = gen::uniform(rng, -0.45, 0.45);
    EXPECT_LE(resonance_frequency(p, phi), f0);
    EXPECT_NEAR(resonance_frequency(p, phi), resonance_frequency(p, -phi), 1e-9 * f0);
  }
}

TEST(Squid, DefaultCalibrationTunesOverTwoHundredMegahertz) {
  const SquidResonatorParams p;
  const double bias = bias_for_detuning(p, 220e6);
  const double span = resonance_frequency(p, 0.0) - resonance_frequency(p, p.flux_at(bias));
  EXPECT_GE(span, 200e6);
}

TEST(Squid, BiasForDetuningRoundTrips) {
  const SquidResonatorParams p;
  for (double det_mhz : {0.0, 30.0, 120.0, 350.0}) {
    const double bias = bias_for_detuning(p, det_mhz * 1e6);
    const double f = resonance_frequency(p, p.flux_at(bias));
    EXPECT_NEAR(resonance_frequency(p, 0.0) - f, det_mhz * 1e6, 1.0) << det_mhz;
  }
  EXPECT_THROW(flux_for_frequency(p, resonance_frequency(p, 0.0) + 1e6), DomainError);
}

TEST(Loss, MeasuredAnchorsAndMidpoint) {
  const LossModel m;
  const double f0 = m.f_ref_ghz * 1e9;
  const LossRates sweet = loss_rates(m, f0);
  EXPECT_NEAR(sweet.kappa_i / kMHz, 0.51, 1e-12);
  EXPECT_NEAR(sweet.kappa_c / kMHz, 2.49, 1e-12);
  const LossRates detuned = loss_rates(m, f0 - 120e6);
  EXPECT_NEAR(detuned.kappa_i / kMHz, 1.48, 1e-9);
  EXPECT_NEAR(detuned.kappa_c / kMHz, 1.45, 1e-9);
  const LossRates mid = loss_rates(m, f0 - 60e6);
  EXPECT_NEAR(mid.kappa_i / kMHz, 0.5 * (0.51 + 1.48), 1e-9);
  EXPECT_NEAR(mid.kappa_c / kMHz, 0.5 * (2.49 + 1.45), 1e-9);
}

TEST(Loss, FromAnchorsReproducesDefaults) {
  const LossModel a = LossModel::from_anchors(6.6, 0.51, 2.49, 120.0, 1.48, 1.45);
  const LossModel d;
  EXPECT_NEAR(a.kappa_i_slope_mhz_per_ghz, d.kappa_i_slope_mhz_per_ghz, 1e-9);
  EXPECT_NEAR(a.kappa_c_slope_mhz_per_ghz, d.kappa_c_slope_mhz_per_ghz, 1e-9);
  EXPECT_THROW(LossModel::from_anchors(6.6, 0.5, 2.5, 0.0, 1.0, 1.0), DomainError);
}

TEST(Loss, OutsideWindowOrNegativeRateThrows) {
  const LossModel m;
  EXPECT_THROW(loss_rates(m, 7.0e9), DomainError);
  EXPECT_THROW(loss_rates(m, 6.0e9), DomainError);
  LossModel steep = m;
  steep.kappa_i_slope_mhz_per_ghz = 100.0;  // negative below the reference
  EXPECT_THROW(loss_rates(steep, 6.5e9), DomainError);
}

TEST(Efficiency, AnchorValues) {
  EXPECT_NEAR(internal_efficiency(0.51, 2.49), 0.830, 1e-3);
  EXPECT_NEAR(internal_efficiency(1.48, 1.45), 0.495, 1e-3);
  EXPECT_DOUBLE_EQ(internal_efficiency(0.0, 3.0), 1.0);
  EXPECT_THROW(internal_efficiency(0.0, 0.0), DomainError);
  EXPECT_THROW(internal_efficiency(-1.0, 1.0), DomainError);
}

TEST(Efficiency, PropertyMonotoneInBothRates) {
  gen::Engine rng(2);
  for (int i = 0; i < 200; ++i) {
    const double ki = gen::uniform(rng, 0.01, 5.0);
    const double kc = gen::uniform(rng, 0.01, 5.0);
    const double d = gen::uniform(rng, 1e-3, 1.0);
    const double e = internal_efficiency(ki, kc);
    EXPECT_LT(internal_efficiency(ki + d, kc), e);
    EXPECT_GT(internal_efficiency(ki, kc + d), e);
  }
}

TEST(Decoherence, RatesFromCoherenceTimes) {
  const TransmonParams p;
  const DecoherenceRates r = decoherence_rates(p);
  EXPECT_NEAR(r.ge.relax, 1.0 / 8.89, 1e-15);
  EXPECT_NEAR(r.ge.pure_dephase, 1.0 / 2.88 - 0.5 / 8.89, 1e-15);
  EXPECT_NEAR(r.ef.relax, 1.0 / 6.99, 1e-15);
  EXPECT_NEAR(r.ef.pure_dephase, 1.0 / 3.16 - 0.5 / 6.99, 1e-15);

  TransmonParams limit;
  limit.t2_ge_us = 2.0 * limit.t1_ge_us;
  EXPECT_NEAR(decoherence_rates(limit).ge.pure_dephase, 0.0, 1e-15);
  TransmonParams bad;
  bad.t2_ef_us = 2.5 * bad.t1_ef_us;
  EXPECT_THROW(decoherence_rates(bad), DomainError);
}

}  // namespace
}  // namespace qlight
