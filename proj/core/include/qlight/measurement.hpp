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

// Amplified dual-quadrature detection of propagating modes. Each shot yields
// one complex outcome per mode, S = a + h^dag, where h is the amplifier's
// noise mode holding `added_quanta` thermal quanta. With no added noise a
// vacuum input has Var(Re S) = Var(Im S) = 1/2 and E|S|^2 = <n> + 1 + Nbar.

#ifndef QLIGHT_MEASUREMENT_HPP
#define QLIGHT_MEASUREMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qlight/fockspace.hpp"

namespace qlight {

struct NoiseModel {
  double added_quanta = 2.0;
  double detection_efficiency = 1.0;
  /// Fraction of the emitted field routed to the detector (0.5 for a hanger).
  double split = 0.5;

  void validate() const;
  double transmissivity() const { return detection_efficiency * split; }
};

/// Measurement basis of the optional transmon ancilla (its g/e qubit).
enum class AncillaBasis : std::int8_t { z = 0, x = 1, y = 2 };

struct QuadratureRecord {
  std::vector<std::string> modes;
  /// shots x modes.
  Matrix signal;
  /// Vacuum-input record with identical noise, shots x modes.
  Matrix reference;
  double added_quanta = 0.0;
  /// Per-shot ancilla basis and outcome (+1, -1, or 0 when the transmon
  /// left the qubit subspace). Empty without an ancilla.
  std::vector<AncillaBasis> ancilla_basis;
  std::vector<std::int8_t> ancilla_outcome;

  std::size_t shots() const { return static_cast<std::size_t>(signal.rows()); }
  bool has_ancilla() const { return !ancilla_outcome.empty(); }
  std::size_t mode_index(const std::string& name) const;
  /// Throws DomainError when shapes or labels disagree.
  void validate() const;
};

struct SamplingOptions {
  std::size_t chunk = 4096;
  unsigned workers = 1;
};

/// Draws `shots` heterodyne outcomes of every mode of `rho` after the
/// transmissivity loss, plus the paired vacuum reference. Deterministic in
/// (inputs, seed) and independent of the worker count.
QuadratureRecord sample_heterodyne(const DensityMatrix& rho, const NoiseModel& noise, std::size_t shots,
                                   std::uint64_t seed, const SamplingOptions& options = {});

/// As above, but `rho` also holds the transmon mode `ancilla` (dimension
/// 2 or 3). Shot k measures the ancilla in basis k mod 3 (Z, X, Y) and the
/// field outcomes are drawn from the conditional photonic state.
QuadratureRecord sample_heterodyne_with_ancilla(const DensityMatrix& rho, const std::string& ancilla,
                                                const NoiseModel& noise, std::size_t shots, std::uint64_t seed,
                                                const SamplingOptions& options = {});

/// Exact mixture sampling from the Husimi distribution of `rho`: one row of
/// complex points per draw (no added noise).
Matrix sample_husimi(const DensityMatrix& rho, std::size_t draws, std::uint64_t seed);

struct HistogramRange {
  int bins = 41;
  double extent = 5.0;  // covers [-extent, extent] on both axes
};

/// Normalized 2-D counts over (Re S, Im S); row index follows Re S.
/// Outcomes outside the range are dropped before normalization.
RealMatrix histogram2d(const QuadratureRecord& rec, const std::string& mode, const HistogramRange& range,
                       bool reference = false);

/// Element-wise signal - vacuum.
RealMatrix subtract_reference(const RealMatrix& signal, const RealMatrix& vacuum);

void write_record(const std::string& path, const QuadratureRecord& rec);
QuadratureRecord read_record(const std::string& path);
/// Columns: shot, mode, re, im, is_reference.
void write_record_csv(const std::string& path, const QuadratureRecord& rec);

}  // namespace qlight

#endif  // QLIGHT_MEASUREMENT_HPP
