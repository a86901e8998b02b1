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

// Run configuration: one JSON file describes one run. Every field has a
// default except the seed; unknown keys are rejected.

#ifndef QLIGHT_TOOLS_CONFIG_HPP
#define QLIGHT_TOOLS_CONFIG_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qlight/device.hpp"
#include "qlight/dynamics.hpp"
#include "qlight/measurement.hpp"
#include "qlight/sequences.hpp"

namespace qlight::app {

struct EmitterSettings {
  bool decoherence = true;
  bool internal_loss = true;
  int resonator_dim = 2;
  double f0g1_scale = 10.0;
  double capture_rate_cap = 1000.0;
  /// Replace the transmon relaxation times (pure dephasing is kept).
  std::optional<double> t1_ge_override_us;
  std::optional<double> t1_ef_override_us;
};

struct PulseSettings {
  double rotation_ns = 80.0;
  double truncation = 0.7;
  double drag = 0.0;
  /// Window length after each f0g1 pulse, in units of 1/kappa.
  double tail_linewidths = 5.0;
  /// Fixed f0g1 amplitude; empty: calibrate per run.
  std::optional<double> f0g1_amplitude;
};

struct EvolveSettings {
  double max_step_us = 1e-3;
  double tolerance = 1e-6;
};

struct TomographySettings {
  int bootstrap = 100;
  int jackknife_blocks = 20;
  /// Photon-number cap of the reconstruction basis (1 covers every emitted
  /// state, which carries at most one photon in total).
  int photon_cap = 1;
};

struct SweepSettings {
  /// Explicit bias grid; empty: `points` biases spanning +-max_detuning_mhz.
  std::vector<double> bias_volts;
  double max_detuning_mhz = 220.0;
  int points = 27;
  int trace_points = 401;
  double half_span_linewidths = 10.0;
  std::optional<double> snr_db;
};

struct EmitSettings {
  double detuning_mhz = 0.0;
  double f0g1_ns = 400.0;
  int histogram_bins = 41;
  double histogram_extent = 5.0;
};

struct TimebinSettings {
  double theta = std::numbers::pi / 2;
  bool entangle = false;
  std::vector<double> detuning_mhz = {0.0, 60.0, 120.0};
  double f0g1_ns = 400.0;
};

struct QutritSettings {
  double theta = std::atan(2.0 * std::sqrt(2.0));
  double phi = std::numbers::pi / 2;
  double detuning_mhz = 0.0;
  double f0g1_ns = 1000.0;
};

struct FitSettings {
  std::string trace;  // CSV path
  double background_re = 1.0;
  double background_im = 0.0;
  double delay_ns = 0.0;
};

struct RunConfig {
  std::string pipeline;
  std::uint64_t seed = 0;
  std::size_t shots = 200000;
  std::string output_dir = "qlight-out";
  unsigned workers = 1;
  /// Also write every quadrature record as CSV (large).
  bool record_csv = false;

  DeviceModel device;
  NoiseModel noise;
  EmitterSettings emitter;
  PulseSettings pulses;
  EvolveSettings evolve;
  TomographySettings tomography;
  SweepSettings sweep;
  EmitSettings emit;
  TimebinSettings timebin;
  QutritSettings qutrit;
  FitSettings fit;

  /// Throws ConfigError on invalid values.
  void validate() const;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Command-line overrides; set fields win over the file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> shots;
  std::optional<std::string> output_dir;
  std::optional<std::string> trace;

  nlohmann::json to_json() const;
};

/// Builds the configuration from JSON text (may be empty for all defaults)
/// and the overrides. `pipeline` is the subcommand; a file naming another
/// pipeline is an error.
RunConfig parse_config(const nlohmann::json& doc, const std::string& pipeline, const Overrides& overrides);
RunConfig load_config(const std::string& path, const std::string& pipeline, const Overrides& overrides);

/// Fully resolved configuration, re-loadable by parse_config.
nlohmann::json to_json(const RunConfig& config);

/// Emitter model at a detuning below the sweet spot, with the settings'
/// switches applied.
EmitterModel emitter_at(const RunConfig& config, double detuning_mhz, double* bias_volts = nullptr);

SequenceTiming timing_for(const RunConfig& config, const EmitterModel& model, double f0g1_ns,
                          double* calibration_residual = nullptr);

EvolveOptions evolve_options(const RunConfig& config);

}  // namespace qlight::app

#endif  // QLIGHT_TOOLS_CONFIG_HPP
