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

// Static device models: the SQUID-tuned resonator, its frequency-dependent
// loss rates and the transmon's decoherence parameters.

#ifndef QLIGHT_DEVICE_HPP
#define QLIGHT_DEVICE_HPP

#include "qlight/common.hpp"

namespace qlight {

struct TransmonParams {
  double f_ge_ghz = 6.1362;
  double ec_mhz = 217.0;
  double t1_ge_us = 8.89;
  double t1_ef_us = 6.99;
  double t2_ge_us = 2.88;
  double t2_ef_us = 3.16;

  /// Throws DomainError unless all times are positive and T2 <= 2 T1.
  void validate() const;
};

/// Lumped-element resonator with an embedded symmetric SQUID (SI units).
struct SquidResonatorParams {
  double l0_h = 2.0e-9;
  double c0_f = 0.0;  // 0 selects the capacitance that puts the sweet spot at sweet_spot_ghz
  double lj0_h = 0.2e-9;
  double flux_per_volt = 0.1;  // flux quanta per volt
  double flux_offset = 0.0;    // flux quanta at zero bias
  double asymmetry = 0.0;      // junction asymmetry, reserved

  double sweet_spot_ghz = 6.6;

  void validate() const;
  /// Capacitance actually used (resolves the c0_f == 0 default).
  double capacitance() const;
  double flux_at(double bias_volts) const { return flux_per_volt * bias_volts + flux_offset; }
};

/// Linear model of kappa_i/2pi and kappa_c/2pi (MHz) against resonator
/// frequency, anchored at a reference frequency.
struct LossModel {
  double f_ref_ghz = 6.6;
  double kappa_i_intercept_mhz = 0.51;  // value at f_ref
  double kappa_i_slope_mhz_per_ghz = (1.48 - 0.51) / -0.120;
  double kappa_c_intercept_mhz = 2.49;
  double kappa_c_slope_mhz_per_ghz = (1.45 - 2.49) / -0.120;
  double window_below_ghz = 0.4;  // supported frequencies: [f_ref - below, f_ref + above]
  double window_above_ghz = 0.01;

  /// Fits both lines through two (detuning, kappa_i, kappa_c) anchors.
  static LossModel from_anchors(double f_ref_ghz, double ki0_mhz, double kc0_mhz, double detuning_mhz,
                                double ki1_mhz, double kc1_mhz);
};

struct LossRates {
  double kappa_i = 0.0;  // rad/us
  double kappa_c = 0.0;  // rad/us
};

struct TransitionRates {
  double relax = 0.0;         // 1/us
  double pure_dephase = 0.0;  // 1/us
};

struct DecoherenceRates {
  TransitionRates ge;
  TransitionRates ef;
};

/// L_j(phi) = Lj0 / |cos(pi phi)|; phi in flux quanta.
double squid_inductance(const SquidResonatorParams& params, double phi);
/// Ordinary resonance frequency in Hz, 1 / (2 pi sqrt((L0 + Lj(phi)) C0)).
double resonance_frequency(const SquidResonatorParams& params, double phi);
/// Smallest |phi| in [0, 0.5) with the given resonance frequency.
double flux_for_frequency(const SquidResonatorParams& params, double freq_hz);
/// Bias voltage (on the positive branch) giving `detuning_hz` below the sweet spot.
double bias_for_detuning(const SquidResonatorParams& params, double detuning_hz);

LossRates loss_rates(const LossModel& model, double freq_hz);

/// kappa_c / (kappa_c + kappa_i).
double internal_efficiency(double kappa_i, double kappa_c);

DecoherenceRates decoherence_rates(const TransmonParams& p);

/// Bundles everything static about the device.
struct DeviceModel {
  TransmonParams transmon;
  SquidResonatorParams resonator;
  LossModel loss;
};

}  // namespace qlight

#endif  // QLIGHT_DEVICE_HPP
