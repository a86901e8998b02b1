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

#ifndef QLIGHT_PULSES_HPP
#define QLIGHT_PULSES_HPP

#include <string>
#include <vector>

#include "qlight/common.hpp"

namespace qlight {

enum class Channel { ge, ef, f0g1 };

enum class EnvelopeKind { drag_gaussian, truncated_gaussian, constant };

std::string to_string(Channel c);
Channel channel_from_string(const std::string& s);

/// Shaped drive envelope. Times are in microseconds.
///
/// drag_gaussian: Gaussian of width `sigma` centred in the window, offset so it
/// vanishes at both edges, with a quadrature component `drag` * d(shape)/dt.
/// truncated_gaussian: Gaussian whose peak is clipped at `truncation` of its
/// maximum and rescaled back to unit height.
struct Envelope {
  EnvelopeKind kind = EnvelopeKind::constant;
  double duration = 0.0;
  double amplitude = 1.0;
  double phase = 0.0;
  double sigma = 0.0;  // 0 selects the kind's default (duration/4 DRAG, duration/6 truncated)
  double drag = 0.0;
  double truncation = 1.0;

  void validate() const;
  double effective_sigma() const;
  /// Real shape in [0, 1] (before amplitude and phase); zero outside [0, duration].
  double shape(double t) const;
  double shape_derivative(double t) const;
  /// amplitude * (shape + i drag shape') * exp(i phase).
  Complex value(double t) const;
  /// Integral of shape over the window.
  double area() const;
};

/// Samples value() at t_k = (k + 1/2) dt, k = 0..round(duration/dt)-1.
std::vector<Complex> sample_envelope(const Envelope& e, double dt);

/// Envelope energy: integral of |value|^2.
double envelope_energy(const Envelope& e);

/// Rotation by `angle` about an equatorial axis at `phase` on a ge or ef
/// transition. The drive term is (Omega(t)/2)(e^{i phase}|hi><lo| + h.c.)
/// with Omega(t) = rabi_scale * envelope, so the integrated Rabi area equals
/// `angle`. The default phase pi/2 rotates about y, taking |lo> to |hi> with a
/// real positive amplitude.
Envelope rotation_pulse(Channel channel, double angle, double duration, double phase = kPi / 2,
                        double rabi_scale = 1.0, double drag = 0.0);

/// Peak-truncated Gaussian drive of the f0g1 transition.
Envelope f0g1_pulse(double duration, double amplitude, double phase = 0.0, double truncation = 0.7);

struct Segment {
  Channel channel = Channel::ge;
  Envelope envelope;
  double start = 0.0;

  double end() const { return start + envelope.duration; }
};

/// Time-ordered drive segments; segments sharing a channel may not overlap.
class PulseSequence {
 public:
  /// Throws DomainError on a negative start or a same-channel overlap.
  void add(Channel channel, Envelope envelope, double start);
  /// Appends after the current end of the sequence; returns the start time.
  double append(Channel channel, Envelope envelope, double gap = 0.0);

  const std::vector<Segment>& segments() const { return segments_; }
  double duration() const;
  std::vector<Segment> on_channel(Channel c) const;

 private:
  std::vector<Segment> segments_;
};

}  // namespace qlight

#endif  // QLIGHT_PULSES_HPP
