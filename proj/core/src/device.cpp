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

#include "qlight/device.hpp"

#include <algorithm>
#include <cmath>

namespace qlight {

namespace {

constexpr double kFluxEpsilon = 1e-6;

void check_pair(double t1, double t2, const char* name) {
  if (!(t1 > 0.0) || !(t2 > 0.0)) throw DomainError(std::string(name) + ": coherence times must be positive");
  if (t2 > 2.0 * t1 * (1.0 + 1e-12)) throw DomainError(std::string(name) + ": T2 exceeds 2*T1");
}

}  // namespace

void TransmonParams::validate() const {
  check_pair(t1_ge_us, t2_ge_us, "ge transition");
  check_pair(t1_ef_us, t2_ef_us, "ef transition");
}

void SquidResonatorParams::validate() const {
  if (!(l0_h > 0.0) || !(lj0_h > 0.0)) throw DomainError("resonator inductances must be positive");
  if (c0_f < 0.0) throw DomainError("resonator capacitance must be positive");
  if (c0_f == 0.0 && !(sweet_spot_ghz > 0.0)) throw DomainError("sweet-spot frequency must be positive");
}

double SquidResonatorParams::capacitance() const {
  if (c0_f > 0.0) return c0_f;
  const double w = kTwoPi * sweet_spot_ghz * 1e9;
  return 1.0 / (w * w * (l0_h + lj0_h));
}

double squid_inductance(const SquidResonatorParams& params, double phi) {
  const double c = std::abs(std::cos(kPi * phi));
  if (c <= kFluxEpsilon) throw NumericalError("SQUID inductance diverges at half-integer flux");
  return params.lj0_h / c;
}

double resonance_frequency(const SquidResonatorParams& params, double phi) {
  params.validate();
  const double l = params.l0_h + squid_inductance(params, phi);
  return 1.0 / (kTwoPi * std::sqrt(l * params.capacitance()));
}

double flux_for_frequency(const SquidResonatorParams& params, double freq_hz) {
  params.validate();
  const double w = kTwoPi * freq_hz;
  const double lj = 1.0 / (w * w * params.capacitance()) - params.l0_h;
  if (!(lj >= params.lj0_h * (1.0 - 1e-12))) throw DomainError("frequency above the sweet spot is not reachable");
  return std::acos(std::min(1.0, params.lj0_h / lj)) / kPi;
}

double bias_for_detuning(const SquidResonatorParams& params, double detuning_hz) {
  if (params.flux_per_volt == 0.0) throw DomainError("flux_per_volt must be non-zero");
  const double f0 = resonance_frequency(params, 0.0);
  const double phi = flux_for_frequency(params, f0 - detuning_hz);
  return (phi - params.flux_offset) / params.flux_per_volt;
}

LossModel LossModel::from_anchors(double f_ref_ghz, double ki0_mhz, double kc0_mhz, double detuning_mhz,
                                  double ki1_mhz, double kc1_mhz) {
  if (detuning_mhz == 0.0) throw DomainError("anchors must be at distinct frequencies");
  LossModel m;
  m.f_ref_ghz = f_ref_ghz;
  m.kappa_i_intercept_mhz = ki0_mhz;
  m.kappa_c_intercept_mhz = kc0_mhz;
  const double df_ghz = -detuning_mhz * 1e-3;
  m.kappa_i_slope_mhz_per_ghz = (ki1_mhz - ki0_mhz) / df_ghz;
  m.kappa_c_slope_mhz_per_ghz = (kc1_mhz - kc0_mhz) / df_ghz;
  return m;
}

LossRates loss_rates(const LossModel& model, double freq_hz) {
  const double f_ghz = freq_hz * 1e-9;
  if (f_ghz < model.f_ref_ghz - model.window_below_ghz || f_ghz > model.f_ref_ghz + model.window_above_ghz) {
    throw DomainError("frequency outside the loss model's supported window");
  }
  const double df = f_ghz - model.f_ref_ghz;
  const double ki = model.kappa_i_intercept_mhz + model.kappa_i_slope_mhz_per_ghz * df;
  const double kc = model.kappa_c_intercept_mhz + model.kappa_c_slope_mhz_per_ghz * df;
  if (ki < 0.0 || kc < 0.0) throw DomainError("loss model evaluates to a negative rate");
  return {kTwoPi * ki, kTwoPi * kc};
}

double internal_efficiency(double kappa_i, double kappa_c) {
  if (kappa_i < 0.0 || kappa_c < 0.0) throw DomainError("loss rates must be non-negative");
  if (kappa_i + kappa_c == 0.0) throw DomainError("efficiency undefined when both rates vanish");
  return kappa_c / (kappa_c + kappa_i);
}

DecoherenceRates decoherence_rates(const TransmonParams& p) {
  p.validate();
  auto rates = [](double t1, double t2) {
    return TransitionRates{1.0 / t1, std::max(0.0, 1.0 / t2 - 1.0 / (2.0 * t1))};
  };
  return {rates(p.t1_ge_us, p.t2_ge_us), rates(p.t1_ef_us, p.t2_ef_us)};
}

}  // namespace qlight
