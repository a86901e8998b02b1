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

#include "qlight/spectro.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qlight/container.hpp"
#include "qlight/parallel.hpp"

namespace qlight {

void S21Trace::validate() const {
  if (freq_ghz.size() != s21.size()) throw DomainError("trace frequency and S21 arrays differ in length");
  for (std::size_t i = 1; i < freq_ghz.size(); ++i) {
    if (!(freq_ghz[i] > freq_ghz[i - 1])) throw DomainError("trace frequencies must be strictly increasing");
  }
}

namespace {

// Internal parameters: (fr GHz, kappa_i/2pi MHz, kappa_c/2pi MHz). The
// notch response depends only on ratios, so MHz work throughout.
using Params = Eigen::Vector3d;

constexpr double kMhzPerGhz = 1e3;

Complex notch(double f_ghz, const Params& p) {
  const Complex d(0.5 * (p(1) + p(2)), kMhzPerGhz * (f_ghz - p(0)));
  return 1.0 - 0.5 * p(2) / d;
}

// d S / d p, analytic.
Eigen::Matrix<Complex, 1, 3> notch_gradient(double f_ghz, const Params& p) {
  const Complex d(0.5 * (p(1) + p(2)), kMhzPerGhz * (f_ghz - p(0)));
  const Complex d2 = d * d;
  Eigen::Matrix<Complex, 1, 3> g;
  g(0) = 0.5 * p(2) / d2 * Complex(0.0, -kMhzPerGhz);
  g(1) = 0.25 * p(2) / d2;
  g(2) = -0.5 / d + 0.25 * p(2) / d2;
  return g;
}

Params to_params(const ResonanceFit& fit) { return {fit.fr_ghz, fit.kappa_i / kTwoPi, fit.kappa_c / kTwoPi}; }

// Dip location, depth and full width of |S21|^2 at its midpoint level; for
// the notch that width equals the total linewidth exactly.
Params initial_guess(const S21Trace& trace) {
  const std::size_t n = trace.s21.size();
  std::vector<double> mag2(n);
  for (std::size_t i = 0; i < n; ++i) mag2[i] = std::norm(trace.s21[i]);
  const auto imin = static_cast<std::size_t>(std::min_element(mag2.begin(), mag2.end()) - mag2.begin());
  std::vector<double> sorted = mag2;
  std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
  const double baseline = sorted[n / 2];
  const double depth2 = mag2[imin] / baseline;
  if (!(depth2 < 0.81)) {
    throw NumericalError("fit did not converge: no resonance dip in trace (min/median |S21| = " +
                         std::to_string(std::sqrt(depth2)) + ")");
  }
  const double level = 0.5 * (1.0 + depth2) * baseline;
  auto crossing = [&](int dir) {
    std::size_t i = imin;
    while (true) {
      if ((dir < 0 && i == 0) || (dir > 0 && i + 1 == n)) return trace.freq_ghz[i];
      const std::size_t j = dir < 0 ? i - 1 : i + 1;
      if (mag2[j] >= level) {
        const double t = (level - mag2[i]) / (mag2[j] - mag2[i]);
        return trace.freq_ghz[i] + t * (trace.freq_ghz[j] - trace.freq_ghz[i]);
      }
      i = j;
    }
  };
  const double width_mhz = std::max(kMhzPerGhz * (crossing(+1) - crossing(-1)), 1e-9);
  const double depth = std::sqrt(depth2);
  return {trace.freq_ghz[imin], depth * width_mhz, (1.0 - depth) * width_mhz};
}

}  // namespace

Complex s21_model(double f_ghz, const ResonanceFit& fit) { return notch(f_ghz, to_params(fit)); }

S21Trace normalize_trace(const S21Trace& trace, const Background& background) {
  trace.validate();
  if (std::abs(background.scale) == 0.0) throw DomainError("background scale must be non-zero");
  S21Trace out = trace;
  for (std::size_t i = 0; i < out.s21.size(); ++i) {
    // delay_ns * f_ghz is dimensionless (ns * GHz).
    const Complex phase = std::polar(1.0, -kTwoPi * trace.freq_ghz[i] * background.delay_ns);
    out.s21[i] /= background.scale * phase;
  }
  return out;
}

ResonanceFit fit_s21(const S21Trace& trace, const FitOptions& options) {
  trace.validate();
  const std::size_t n = trace.s21.size();
  if (n < 50) throw DomainError("fit_s21 needs at least 50 points");
  Params p = options.initial ? to_params(*options.initial) : initial_guess(trace);
  const double span_mhz = kMhzPerGhz * (trace.freq_ghz.back() - trace.freq_ghz.front());
  if (span_mhz < 5.0 * (p(1) + p(2))) throw DomainError("trace must span at least 5 linewidths");

  auto residuals = [&](const Params& q, Eigen::VectorXd& r) {
    r.resize(static_cast<Eigen::Index>(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
      const Complex e = notch(trace.freq_ghz[i], q) - trace.s21[i];
      r(static_cast<Eigen::Index>(2 * i)) = e.real();
      r(static_cast<Eigen::Index>(2 * i + 1)) = e.imag();
    }
    return r.squaredNorm();
  };
  auto jacobian = [&](const Params& q) {
    Eigen::MatrixXd j(static_cast<Eigen::Index>(2 * n), 3);
    for (std::size_t i = 0; i < n; ++i) {
      const auto g = notch_gradient(trace.freq_ghz[i], q);
      for (int k = 0; k < 3; ++k) {
        j(static_cast<Eigen::Index>(2 * i), k) = g(k).real();
        j(static_cast<Eigen::Index>(2 * i + 1), k) = g(k).imag();
      }
    }
    return j;
  };

  Eigen::VectorXd r, r_trial;
  double cost = residuals(p, r);
  double lambda = 1e-3;
  int iter = 0;
  bool converged = false;
  Eigen::MatrixXd j = jacobian(p);
  for (; iter < options.max_iterations && !converged; ++iter) {
    const Eigen::Matrix3d jtj = j.transpose() * j;
    const Eigen::Vector3d grad = j.transpose() * r;
    bool accepted = false;
    while (!accepted) {
      Eigen::Matrix3d a = jtj;
      for (int k = 0; k < 3; ++k) a(k, k) += lambda * std::max(jtj(k, k), 1e-300);
      const Eigen::Vector3d step = a.ldlt().solve(-grad);
      const Params trial = p + step;
      const double trial_cost =
          (trial(1) > 0.0 && trial(2) > 0.0) ? residuals(trial, r_trial) : std::numeric_limits<double>::infinity();
      if (trial_cost <= cost) {
        const double rel = std::max({std::abs(step(0)) / std::max(std::abs(p(0)), 1e-300),
                                     std::abs(step(1)) / p(1), std::abs(step(2)) / p(2)});
        converged = rel < options.tolerance || cost - trial_cost <= 1e-15 * cost || trial_cost == 0.0;
        p = trial;
        cost = trial_cost;
        r.swap(r_trial);
        j = jacobian(p);
        lambda = std::max(lambda / 10.0, 1e-12);
        accepted = true;
      } else {
        lambda *= 10.0;
        if (lambda > 1e12) {
          // No descent direction left: the current point is a minimum to
          // working precision.
          converged = true;
          break;
        }
      }
    }
  }
  if (!converged) {
    throw NumericalError("fit did not converge after " + std::to_string(iter) +
                         " iterations (rms residual " + std::to_string(std::sqrt(cost / n)) + ")");
  }
  if (!(p(1) > 0.0 && p(2) > 0.0) || p(0) < trace.freq_ghz.front() || p(0) > trace.freq_ghz.back()) {
    throw NumericalError("fit did not converge to a resonance inside the trace");
  }

  ResonanceFit fit;
  fit.fr_ghz = p(0);
  fit.kappa_i = kTwoPi * p(1);
  fit.kappa_c = kTwoPi * p(2);
  fit.residual = std::sqrt(cost / static_cast<double>(n));
  fit.iterations = iter;
  const double sigma2 = cost / static_cast<double>(2 * n - 3);
  const Eigen::Matrix3d cov = sigma2 * (j.transpose() * j).inverse();
  const Eigen::Vector3d scale(1.0, kTwoPi, kTwoPi);
  fit.covariance = scale.asDiagonal() * cov * scale.asDiagonal();
  return fit;
}

S21Trace synthesize_trace(const ResonanceFit& params, const std::vector<double>& freq_ghz, std::optional<double> snr_db,
                          std::uint64_t seed) {
  S21Trace trace;
  trace.freq_ghz = freq_ghz;
  trace.s21.reserve(freq_ghz.size());
  for (double f : freq_ghz) trace.s21.push_back(s21_model(f, params));
  if (snr_db) {
    // Unit off-resonance transmission sets the signal power.
    const double sigma = std::sqrt(std::pow(10.0, -*snr_db / 10.0) / 2.0);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma);
    for (auto& s : trace.s21) s += Complex(gauss(rng), gauss(rng));
  }
  trace.validate();
  return trace;
}

FluxSweep flux_sweep(const DeviceModel& device, const std::vector<double>& biases_volts,
                     const FluxSweepOptions& options) {
  if (options.points < 50) throw DomainError("flux sweep traces need at least 50 points");
  if (!(options.half_span_linewidths >= 2.5)) throw DomainError("trace half-span must be at least 2.5 linewidths");
  FluxSweep out;
  for (std::size_t b = 0; b < biases_volts.size(); ++b) {
    const double bias = biases_volts[b];
    ResonanceFit params;
    try {
      const double f_hz = resonance_frequency(device.resonator, device.resonator.flux_at(bias));
      const LossRates rates = loss_rates(device.loss, f_hz);
      params.fr_ghz = f_hz * 1e-9;
      params.kappa_i = rates.kappa_i;
      params.kappa_c = rates.kappa_c;
    } catch (const Error& e) {
      out.skipped.emplace_back(bias, e.what());
      continue;
    }
    const double half_ghz =
        options.half_span_linewidths * (params.kappa_i + params.kappa_c) / kTwoPi / kMhzPerGhz;
    std::vector<double> grid(static_cast<std::size_t>(options.points));
    for (int i = 0; i < options.points; ++i) {
      grid[static_cast<std::size_t>(i)] = params.fr_ghz - half_ghz + 2.0 * half_ghz * i / (options.points - 1);
    }
    S21Trace t = synthesize_trace(params, grid, options.snr_db, derive_seed(options.seed, b));
    t.bias_volts = bias;
    out.traces.push_back(std::move(t));
  }
  return out;
}

LinearRegression kappa_regression(const std::vector<ResonanceFit>& fits, bool coupling) {
  if (fits.size() < 3) throw DomainError("kappa regression needs at least 3 fit points");
  const auto n = static_cast<double>(fits.size());
  double mx = 0.0, my = 0.0;
  for (const auto& f : fits) {
    mx += f.fr_ghz / n;
    my += (coupling ? f.kappa_c : f.kappa_i) / kTwoPi / n;
  }
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& f : fits) {
    const double dx = f.fr_ghz - mx;
    const double dy = (coupling ? f.kappa_c : f.kappa_i) / kTwoPi - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw DomainError("kappa regression needs distinct resonance frequencies");
  LinearRegression out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  out.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return out;
}

void write_trace_csv(const std::string& path, const S21Trace& trace) {
  trace.validate();
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  os.precision(17);
  os << "freq_hz,re_s21,im_s21\n";
  for (std::size_t i = 0; i < trace.s21.size(); ++i) {
    os << trace.freq_ghz[i] * 1e9 << ',' << trace.s21[i].real() << ',' << trace.s21[i].imag() << '\n';
  }
  if (!os) throw Error("write failed: " + path);
}

S21Trace read_trace_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path);
  S21Trace trace;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double f = 0.0, re = 0.0, im = 0.0;
    if (!(ls >> f >> re >> im)) {
      if (lineno == 1) continue;  // header
      throw Error(path + ":" + std::to_string(lineno) + ": expected freq_hz,re_s21,im_s21");
    }
    trace.freq_ghz.push_back(f * 1e-9);
    trace.s21.emplace_back(re, im);
  }
  trace.validate();
  return trace;
}

void write_trace(const std::string& path, const S21Trace& trace) {
  trace.validate();
  ColumnTable table;
  std::vector<double> f, re, im;
  for (std::size_t i = 0; i < trace.s21.size(); ++i) {
    f.push_back(trace.freq_ghz[i] * 1e9);
    re.push_back(trace.s21[i].real());
    im.push_back(trace.s21[i].imag());
  }
  table.add("freq_hz", std::move(f));
  table.add("re_s21", std::move(re));
  table.add("im_s21", std::move(im));
  table.metadata = nlohmann::json{{"format", "qlight.s21_trace"}, {"bias_volts", trace.bias_volts}}.dump();
  write_columns(path, table);
}

S21Trace read_trace(const std::string& path) {
  const ColumnTable table = read_columns(path);
  const auto meta = nlohmann::json::parse(table.metadata.empty() ? "{}" : table.metadata, nullptr, false);
  if (meta.is_discarded() || meta.value("format", "") != "qlight.s21_trace") {
    throw Error(path + ": not an S21 trace container");
  }
  S21Trace trace;
  trace.bias_volts = meta.value("bias_volts", 0.0);
  const auto& f = table.column("freq_hz");
  const auto& re = table.column("re_s21");
  const auto& im = table.column("im_s21");
  for (std::size_t i = 0; i < f.size(); ++i) {
    trace.freq_ghz.push_back(f[i] * 1e-9);
    trace.s21.emplace_back(re[i], im[i]);
  }
  trace.validate();
  return trace;
}

std::string fit_report_json(const ResonanceFit& fit) {
  const double mhz = 1.0 / kTwoPi;
  nlohmann::json j;
  j["fr_ghz"] = fit.fr_ghz;
  j["fr_ghz_err"] = std::sqrt(fit.covariance(0, 0));
  j["kappa_i_mhz"] = fit.kappa_i * mhz;
  j["kappa_i_mhz_err"] = std::sqrt(fit.covariance(1, 1)) * mhz;
  j["kappa_c_mhz"] = fit.kappa_c * mhz;
  j["kappa_c_mhz_err"] = std::sqrt(fit.covariance(2, 2)) * mhz;
  j["dip_depth"] = fit.dip_depth();
  j["efficiency"] = internal_efficiency(fit.kappa_i, fit.kappa_c);
  j["rms_residual"] = fit.residual;
  j["iterations"] = fit.iterations;
  return j.dump();
}

}  // namespace qlight
