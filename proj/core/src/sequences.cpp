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

#include "qlight/sequences.hpp"

#include <algorithm>
#include <cmath>

namespace qlight {

namespace {

// Lays out rotations back to back and emissions no earlier than the end of
// the previous emission window.
class Builder {
 public:
  explicit Builder(const SequenceTiming& timing) : timing_(timing) {
    if (!(timing.rotation_us > 0.0) || !(timing.f0g1_us > 0.0)) throw DomainError("pulse durations must be positive");
    if (!(timing.tail_us >= 0.0)) throw DomainError("window tail must be non-negative");
  }

  void rotate(Channel channel, double angle) {
    if (angle <= 0.0) return;
    protocol_.sequence.add(channel,
                           rotation_pulse(channel, angle, timing_.rotation_us, kPi / 2, timing_.rabi_scale, timing_.drag),
                           cursor_);
    cursor_ += timing_.rotation_us;
  }

  void emit(const std::string& mode) {
    const double start = std::max(cursor_, window_end_);
    protocol_.sequence.add(Channel::f0g1, f0g1_pulse(timing_.f0g1_us, timing_.f0g1_amplitude, 0.0, timing_.truncation),
                           start);
    cursor_ = start + timing_.f0g1_us;
    window_end_ = cursor_ + timing_.tail_us;
    protocol_.windows.push_back({mode, start, window_end_});
  }

  Protocol take() { return std::move(protocol_); }

 private:
  SequenceTiming timing_;
  Protocol protocol_;
  double cursor_ = 0.0;
  double window_end_ = 0.0;
};

void check_angle(double a, const char* name) {
  if (!(a >= 0.0 && a <= kPi * (1.0 + 1e-12))) throw DomainError(std::string(name) + " must lie in [0, pi]");
}

Vector target_from_terms(const Space& space, const std::vector<std::pair<std::vector<std::pair<std::string, int>>, double>>& terms) {
  Vector psi = Vector::Zero(space.dimension());
  for (const auto& [levels, amp] : terms) {
    std::vector<int> occ(space.num_modes(), 0);
    for (const auto& [name, level] : levels) {
      if (space.contains(name)) {
        occ[space.index_of(name)] = level;
      } else if (level != 0) {
        throw DomainError("target space lacks mode '" + name + "'");
      }
    }
    psi += amp * basis_vector(space, occ);
  }
  return psi;
}

}  // namespace

Protocol single_photon_protocol(const SequenceTiming& timing) {
  Builder b(timing);
  b.rotate(Channel::ge, kPi);
  b.rotate(Channel::ef, kPi);
  b.emit("p");
  return b.take();
}

Protocol timebin_protocol(double theta, bool entangle, const SequenceTiming& timing) {
  check_angle(theta, "theta");
  Builder b(timing);
  b.rotate(Channel::ge, theta);
  b.rotate(Channel::ef, kPi);
  b.rotate(Channel::ge, kPi);
  b.emit("E");
  b.rotate(Channel::ef, kPi);
  if (entangle) b.rotate(Channel::ge, kPi);
  b.emit("L");
  return b.take();
}

Protocol qutrit_protocol(double theta, double phi, const SequenceTiming& timing) {
  check_angle(theta, "theta");
  check_angle(phi, "phi");
  Builder b(timing);
  b.rotate(Channel::ge, kPi);
  b.rotate(Channel::ef, theta);
  b.emit("a");
  b.rotate(Channel::ef, phi);
  b.emit("b");
  b.rotate(Channel::ef, kPi);
  b.emit("c");
  return b.take();
}

std::vector<CaptureBin> capture_bins(const Protocol& protocol, const EmitterModel& model, int bin_dim) {
  std::vector<CaptureBin> bins;
  const auto pulses = protocol.sequence.on_channel(Channel::f0g1);
  for (const auto& w : protocol.windows) {
    const auto it = std::find_if(pulses.begin(), pulses.end(),
                                 [&](const Segment& s) { return std::abs(s.start - w.start) < 1e-12; });
    if (it == pulses.end()) throw DomainError("window '" + w.mode + "' has no f0g1 pulse");
    Envelope reference = it->envelope;
    reference.phase = 0.0;
    const EmissionMode mode = emission_mode(model, reference, w.end - w.start);
    bins.push_back(make_capture_bin(ModeLabel(w.mode, bin_dim), w.start, w.end, mode, model.capture_rate_cap));
  }
  return bins;
}

Vector timebin_target(const Space& space, double theta, bool entangle) {
  check_angle(theta, "theta");
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return target_from_terms(space, {{{{"q", 0}, {"E", 0}, {"L", 1}}, c},
                                   {{{"q", entangle ? 1 : 0}, {"E", 1}, {"L", 0}}, s}});
}

Vector qutrit_target(const Space& space, double theta, double phi) {
  check_angle(theta, "theta");
  check_angle(phi, "phi");
  const double ct = std::cos(theta / 2), st = std::sin(theta / 2);
  return target_from_terms(space, {{{{"a", 1}}, st},
                                   {{{"b", 1}}, ct * std::sin(phi / 2)},
                                   {{{"c", 1}}, ct * std::cos(phi / 2)}});
}

}  // namespace qlight
