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

#include "qlight/pulses.hpp"

#include <algorithm>
#include <cmath>

namespace qlight {

std::string to_string(Channel c) {
  switch (c) {
    case Channel::ge:
      return "ge";
    case Channel::ef:
      return "ef";
    case Channel::f0g1:
      return "f0g1";
  }
  return "?";
}

Channel channel_from_string(const std::string& s) {
  if (s == "ge") return Channel::ge;
  if (s == "ef") return Channel::ef;
  if (s == "f0g1") return Channel::f0g1;
  throw DomainError("unknown drive channel '" + s + "'");
}

void Envelope::validate() const {
  if (!(duration > 0.0)) throw DomainError("envelope duration must be positive");
  if (!std::isfinite(amplitude) || !std::isfinite(phase) || !std::isfinite(drag)) {
    throw DomainError("envelope parameters must be finite");
  }
  if (sigma < 0.0) throw DomainError("envelope sigma must be non-negative");
  if (kind == EnvelopeKind::truncated_gaussian && !(truncation > 0.0 && truncation <= 1.0)) {
    throw DomainError("truncation fraction must lie in (0, 1]");
  }
}

double Envelope::effective_sigma() const {
  if (sigma > 0.0) return sigma;
  return kind == EnvelopeKind::drag_gaussian ? duration / 4.0 : duration / 6.0;
}

namespace {

double gaussian(double t, double centre, double sigma) {
  const double x = (t - centre) / sigma;
  return std::exp(-0.5 * x * x);
}

}  // namespace

double Envelope::shape(double t) const {
  if (t < 0.0 || t > duration) return 0.0;
  switch (kind) {
    case EnvelopeKind::constant:
      return 1.0;
    case EnvelopeKind::drag_gaussian: {
      const double s = effective_sigma();
      const double g0 = gaussian(0.0, 0.5 * duration, s);
      return (gaussian(t, 0.5 * duration, s) - g0) / (1.0 - g0);
    }
    case EnvelopeKind::truncated_gaussian:
      return std::min(gaussian(t, 0.5 * duration, effective_sigma()), truncation) / truncation;
  }
  return 0.0;
}

double Envelope::shape_derivative(double t) const {
  if (t < 0.0 || t > duration) return 0.0;
  const double s = effective_sigma();
  const double c = 0.5 * duration;
  switch (kind) {
    case EnvelopeKind::constant:
      return 0.0;
    case EnvelopeKind::drag_gaussian: {
      const double g0 = gaussian(0.0, c, s);
      return -(t - c) / (s * s) * gaussian(t, c, s) / (1.0 - g0);
    }
    case EnvelopeKind::truncated_gaussian: {
      const double g = gaussian(t, c, s);
      return g >= truncation ? 0.0 : -(t - c) / (s * s) * g / truncation;
    }
  }
  return 0.0;
}

Complex Envelope::value(double t) const {
  const double sh = shape(t);
  if (sh == 0.0 && drag == 0.0) return 0.0;
  return amplitude * Complex(sh, drag * shape_derivative(t)) * std::polar(1.0, phase);
}

double Envelope::area() const {
  const double s = effective_sigma();
  const double half = 0.5 * duration;
  const double full_gauss = s * std::sqrt(kTwoPi) * std::erf(half / (std::sqrt(2.0) * s));
  switch (kind) {
    case EnvelopeKind::constant:
      return duration;
    case EnvelopeKind::drag_gaussian: {
      const double g0 = gaussian(0.0, half, s);
      return (full_gauss - duration * g0) / (1.0 - g0);
    }
    case EnvelopeKind::truncated_gaussian: {
      if (truncation >= 1.0) return full_gauss;
      // Plateau where the Gaussian exceeds the clip level.
      const double w = std::min(half, s * std::sqrt(-2.0 * std::log(truncation)));
      const double wings = full_gauss - s * std::sqrt(kTwoPi) * std::erf(w / (std::sqrt(2.0) * s));
      return 2.0 * w + wings / truncation;
    }
  }
  return 0.0;
}

std::vector<Complex> sample_envelope(const Envelope& e, double dt) {
  e.validate();
  if (!(dt > 0.0)) throw DomainError("sampling step must be positive");
  if (dt > e.duration / 10.0 * (1.0 + 1e-12)) throw DomainError("sampling step coarser than duration/10");
  const auto n = static_cast<std::size_t>(std::llround(e.duration / dt));
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = e.value((static_cast<double>(k) + 0.5) * dt);
  return out;
}

double envelope_energy(const Envelope& e) {
  e.validate();
  // Composite Simpson on a fine grid.
  constexpr int kIntervals = 4000;
  const double h = e.duration / kIntervals;
  double acc = 0.0;
  for (int k = 0; k <= kIntervals; ++k) {
    const double w = (k == 0 || k == kIntervals) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    acc += w * std::norm(e.value(k * h));
  }
  return acc * h / 3.0;
}

Envelope rotation_pulse(Channel channel, double angle, double duration, double phase, double rabi_scale,
                        double drag) {
  if (channel == Channel::f0g1) throw DomainError("rotation pulses act on the ge or ef channel");
  if (!(angle > 0.0 && angle <= kTwoPi * (1.0 + 1e-12))) throw DomainError("rotation angle must lie in (0, 2pi]");
  if (!(rabi_scale > 0.0)) throw DomainError("rabi_scale must be positive");
  Envelope e;
  e.kind = EnvelopeKind::drag_gaussian;
  e.duration = duration;
  e.phase = phase;
  e.drag = drag;
  e.validate();
  e.amplitude = angle / (rabi_scale * e.area());
  return e;
}

Envelope f0g1_pulse(double duration, double amplitude, double phase, double truncation) {
  Envelope e;
  e.kind = EnvelopeKind::truncated_gaussian;
  e.duration = duration;
  e.amplitude = amplitude;
  e.phase = phase;
  e.truncation = truncation;
  e.validate();
  return e;
}

void PulseSequence::add(Channel channel, Envelope envelope, double start) {
  envelope.validate();
  if (start < 0.0) throw DomainError("segment start must be non-negative");
  const double end = start + envelope.duration;
  for (const auto& s : segments_) {
    if (s.channel == channel && start < s.end() - 1e-12 && s.start < end - 1e-12) {
      throw DomainError("overlapping segments on channel " + to_string(channel));
    }
  }
  Segment seg{channel, std::move(envelope), start};
  const auto pos = std::upper_bound(segments_.begin(), segments_.end(), start,
                                    [](double t, const Segment& s) { return t < s.start; });
  segments_.insert(pos, std::move(seg));
}

double PulseSequence::append(Channel channel, Envelope envelope, double gap) {
  const double start = duration() + gap;
  add(channel, std::move(envelope), start);
  return start;
}

double PulseSequence::duration() const {
  double end = 0.0;
  for (const auto& s : segments_) end = std::max(end, s.end());
  return end;
}

std::vector<Segment> PulseSequence::on_channel(Channel c) const {
  std::vector<Segment> out;
  for (const auto& s : segments_) {
    if (s.channel == c) out.push_back(s);
  }
  return out;
}

}  // namespace qlight
