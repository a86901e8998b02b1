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

// Pulse protocols for single photons, time-bin qubits and photonic qutrits,
// with the emission windows their photons occupy.

#ifndef QLIGHT_SEQUENCES_HPP
#define QLIGHT_SEQUENCES_HPP

#include <string>
#include <vector>

#include "qlight/dynamics.hpp"
#include "qlight/pulses.hpp"

namespace qlight {

struct SequenceTiming {
  double rotation_us = 0.08;
  double f0g1_us = 0.4;
  /// f0g1 envelope amplitude; normally from calibrate_f0g1_amplitude.
  double f0g1_amplitude = 1.0;
  double truncation = 0.7;
  /// Window length beyond each f0g1 pulse.
  double tail_us = 0.3;
  double rabi_scale = 1.0;
  double drag = 0.0;
};

struct EmissionWindow {
  std::string mode;
  double start = 0.0;
  double end = 0.0;
};

struct Protocol {
  PulseSequence sequence;
  /// One window per f0g1 pulse, in emission order.
  std::vector<EmissionWindow> windows;
};

/// pi_ge, pi_ef, f0g1 into mode "p".
Protocol single_photon_protocol(const SequenceTiming& timing);

/// From |g>: R_y(theta) on ge, then pi_ef, pi_ge, f0g1 (early), pi_ef,
/// [pi_ge if entangle], f0g1 (late). Photonic modes "E" and "L".
/// theta in [0, pi].
Protocol timebin_protocol(double theta, bool entangle, const SequenceTiming& timing);

/// From |g>: pi_ge, R_y(theta) on ef, f0g1 (a), R_y(phi) on ef, f0g1 (b),
/// pi_ef, f0g1 (c). Photonic modes "a", "b", "c". theta, phi in [0, pi].
Protocol qutrit_protocol(double theta, double phi, const SequenceTiming& timing);

/// Capture bins matched to each window's f0g1 pulse.
std::vector<CaptureBin> capture_bins(const Protocol& protocol, const EmitterModel& model, int bin_dim = 2);

/// Ideal time-bin output on `space`, which holds modes "E" and "L" and
/// optionally the transmon "q" (any dimension >= 2):
/// cos(theta/2)|L> + sin(theta/2)|E>, or cos(theta/2)|g,L> + sin(theta/2)|e,E>.
Vector timebin_target(const Space& space, double theta, bool entangle);

/// Ideal qutrit output on modes "a", "b", "c" (optionally with "q" in |g>):
/// sin(theta/2)|1_a> + cos(theta/2) sin(phi/2)|1_b> + cos(theta/2) cos(phi/2)|1_c>.
Vector qutrit_target(const Space& space, double theta, double phi);

}  // namespace qlight

#endif  // QLIGHT_SEQUENCES_HPP
