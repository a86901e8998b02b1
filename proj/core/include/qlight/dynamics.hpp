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

// Lindblad evolution of the transmon-resonator emitter with the propagating
// field captured into virtual absorber modes ("capture bins"). Each bin is a
// cascaded cavity fed unidirectionally by the resonator output during its
// window, with a time-dependent coupling matched to the expected photon
// envelope so that the whole temporal mode is absorbed.
//
// Emitter space: transmon "q" (levels g, e, f) followed by resonator "r".
// Time in us, rates in rad/us.

#ifndef QLIGHT_DYNAMICS_HPP
#define QLIGHT_DYNAMICS_HPP

#include <span>
#include <string>
#include <vector>

#include "qlight/device.hpp"
#include "qlight/fockspace.hpp"
#include "qlight/pulses.hpp"

namespace qlight {

inline constexpr const char* kTransmonMode = "q";
inline constexpr const char* kResonatorMode = "r";

struct EmitterModel {
  int resonator_dim = 2;
  double kappa_c = 0.0;
  double kappa_i = 0.0;
  /// Effective f0g1 coupling (rad/us) per unit envelope amplitude.
  double f0g1_scale = 10.0;
  /// Rabi rate (rad/us) per unit envelope amplitude on the ge/ef channels.
  double rabi_scale = 1.0;
  DecoherenceRates transmon;
  /// Upper bound on a capture bin's absorption rate |g|^2 (1/us).
  double capture_rate_cap = 1000.0;

  void validate() const;
  double kappa() const { return kappa_c + kappa_i; }
  Space emitter_space() const;

  /// Model at a flux bias: loss rates from the device's loss model at the
  /// biased resonance frequency, transmon rates from its coherence times.
  static EmitterModel from_device(const DeviceModel& device, double bias_volts, bool decoherence = true);
};

/// Coefficients of the two diagonal dephasing operators
/// sqrt(c_ge/2) diag(-1, 1, 0) and sqrt(c_ef/2) diag(0, -1, 1) that reproduce
/// the ge and ef pure-dephasing rates.
struct DephasingCoefficients {
  double ge = 0.0;
  double ef = 0.0;
};
DephasingCoefficients dephasing_coefficients(const DecoherenceRates& rates);

/// Normalized temporal mode of one f0g1 emission, sampled from t = 0 (pulse
/// start) on a uniform grid. Computed from the no-jump amplitudes of
/// |f,0> -> |g,1> -> output with the envelope's phase set to zero, so the
/// mode serves as the phase reference of the capture.
struct EmissionMode {
  double dt = 0.0;
  std::vector<Complex> amplitude;
  /// Fraction of the initial |f,0> amplitude that leaves through kappa_c.
  double emitted_fraction = 0.0;
  /// |f> population left at the end of the pulse.
  double residual = 0.0;
};

EmissionMode emission_mode(const EmitterModel& model, const Envelope& f0g1, double window, double dt = 2.5e-4);

/// |f> population left when the pulse ends, from the no-jump dynamics.
double f0g1_residual(const EmitterModel& model, const Envelope& f0g1);

struct F0g1Calibration {
  double amplitude = 0.0;
  double residual = 1.0;
};

/// Smallest envelope amplitude at which the f0g1 pulse empties |f>
/// (a local minimum of the residual below `target`); falls back to the best
/// minimum found.
F0g1Calibration calibrate_f0g1_amplitude(const EmitterModel& model, double duration, double truncation = 0.7,
                                         double target = 1e-6);

struct CaptureBin {
  ModeLabel label;
  double t_start = 0.0;
  double t_end = 0.0;
  double grid_dt = 0.0;
  /// Complex coupling amplitude g(t) on the grid; |g|^2 is the capture rate.
  std::vector<Complex> coupling;

  Complex coupling_at(double t) const;
};

/// Absorber matched to `mode` starting at `t_start`: g(t) = -conj(v)/sqrt(int_0^t |v|^2),
/// with |g|^2 capped at `rate_cap`.
CaptureBin make_capture_bin(ModeLabel label, double t_start, double t_end, const EmissionMode& mode,
                            double rate_cap);

struct EvolveOptions {
  double max_step = 1e-3;
  double min_step = 1e-8;
  /// Accepted when the step-doubling difference is below tolerance * max(1, |rho|_max).
  double tolerance = 1e-6;
  double record_interval = 0.01;
  double uncovered_threshold = 1e-3;
};

struct TrajectoryPoint {
  double t = 0.0;
  double p_g = 0.0;
  double p_e = 0.0;
  double p_f = 0.0;
  double n_resonator = 0.0;
  std::vector<double> n_bins;
};

struct SimulationResult {
  /// Joint state of the transmon and the capture bins (resonator traced out).
  DensityMatrix state = DensityMatrix::vacuum(Space{});
  std::vector<double> captured;
  double resonator_residual = 0.0;
  /// Integrated photon flux into kappa_i.
  double internal_loss = 0.0;
  /// Integrated output flux not absorbed by any bin.
  double output_loss = 0.0;
  /// Integrated e -> g relaxation (the only transmon channel that removes an excitation).
  double transmon_decay = 0.0;
  /// <P_e + P_f + n_r + sum n_bins> at start and end.
  double initial_excitation = 0.0;
  double final_excitation = 0.0;
  bool uncovered_emission = false;
  std::vector<TrajectoryPoint> trajectory;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
};

/// Integrates the master equation from `rho0` (over the emitter space) with
/// the bins starting in vacuum. Throws NumericalError if a step cannot meet
/// the tolerance above min_step.
SimulationResult evolve(const DensityMatrix& rho0, const PulseSequence& sequence, const EmitterModel& model,
                        std::span<const CaptureBin> bins, const EvolveOptions& options = {});

}  // namespace qlight

#endif  // QLIGHT_DYNAMICS_HPP
