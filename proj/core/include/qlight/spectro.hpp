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

// Hanger-resonator transmission: the notch model, its least-squares fit and
// synthetic flux sweeps of the SQUID-tuned resonator.

#ifndef QLIGHT_SPECTRO_HPP
#define QLIGHT_SPECTRO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qlight/common.hpp"
#include "qlight/device.hpp"

namespace qlight {

struct S21Trace {
  std::vector<double> freq_ghz;  // strictly increasing
  std::vector<Complex> s21;
  double bias_volts = 0.0;

  /// Throws DomainError on size mismatch or non-increasing frequencies.
  void validate() const;
};

struct ResonanceFit {
  double fr_ghz = 0.0;
  double kappa_i = 0.0;  // rad/us
  double kappa_c = 0.0;  // rad/us
  /// Root-mean-square complex residual.
  double residual = 0.0;
  /// Covariance of (fr_ghz, kappa_i, kappa_c) in those units.
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
  int iterations = 0;

  /// |S21(fr)| = kappa_i / (kappa_i + kappa_c).
  double dip_depth() const { return kappa_i / (kappa_i + kappa_c); }
};

/// S21 = 1 - (kappa_c/2) / (i (w - w_r) + (kappa_i + kappa_c)/2).
Complex s21_model(double f_ghz, const ResonanceFit& fit);

/// Optional pre-normalization for external data: S21 / (scale exp(-2 pi i f tau)).
struct Background {
  Complex scale = 1.0;
  double delay_ns = 0.0;
};

S21Trace normalize_trace(const S21Trace& trace, const Background& background);

struct FitOptions {
  std::optional<ResonanceFit> initial;  // empty: estimate from the dip
  int max_iterations = 200;
  double tolerance = 1e-14;  // relative parameter step at convergence
};

/// Damped Gauss-Newton (Levenberg-Marquardt) fit on complex residuals.
/// Throws DomainError on unusable traces and NumericalError when no dip is
/// found or the iteration does not converge.
ResonanceFit fit_s21(const S21Trace& trace, const FitOptions& options = {});

struct FluxSweepOptions {
  int points = 401;
  /// Half-span of each trace in units of the total linewidth.
  double half_span_linewidths = 10.0;
  /// Signal-to-noise ratio of the added complex Gaussian noise; empty: none.
  std::optional<double> snr_db;
  std::uint64_t seed = 0;
};

struct FluxSweep {
  std::vector<S21Trace> traces;
  /// Bias points that could not be synthesized, with the reason.
  std::vector<std::pair<double, std::string>> skipped;
};

/// One synthetic trace per bias, centred on the resonance at that bias.
FluxSweep flux_sweep(const DeviceModel& device, const std::vector<double>& biases_volts,
                     const FluxSweepOptions& options = {});

/// Single trace on a given frequency grid from known parameters.
S21Trace synthesize_trace(const ResonanceFit& params, const std::vector<double>& freq_ghz,
                          std::optional<double> snr_db = std::nullopt, std::uint64_t seed = 0);

struct LinearRegression {
  double slope = 0.0;      // MHz per GHz
  double intercept = 0.0;  // MHz at 0 GHz
  double r_squared = 0.0;

  double at(double f_ghz) const { return intercept + slope * f_ghz; }
};

/// Ordinary least squares of kappa/2pi (MHz) against fr (GHz); the internal
/// rate by default, the coupling rate when `coupling` is set.
LinearRegression kappa_regression(const std::vector<ResonanceFit>& fits, bool coupling = false);

/// Columns freq_hz, re_s21, im_s21 with a header line.
void write_trace_csv(const std::string& path, const S21Trace& trace);
S21Trace read_trace_csv(const std::string& path);
void write_trace(const std::string& path, const S21Trace& trace);
S21Trace read_trace(const std::string& path);

/// JSON text with the fitted values, their standard errors and derived
/// quantities.
std::string fit_report_json(const ResonanceFit& fit);

}  // namespace qlight

#endif  // QLIGHT_SPECTRO_HPP
