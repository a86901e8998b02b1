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

#include "pipelines.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "qlight/parallel.hpp"
#include "qlight/spectro.hpp"

namespace qlight::app {

using nlohmann::json;

namespace {

// Stream indices for derive_seed; fixed so adding a stage never shifts
// another stage's randomness.
constexpr std::uint64_t kSamplingStream = 0;
constexpr std::uint64_t kBootstrapStream = 1;
constexpr std::uint64_t kSweepNoiseStream = 2;

template <typename F>
auto stage(const char* name, F&& body) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

std::filesystem::path output_path(const RunConfig& config, const std::string& name) {
  std::filesystem::create_directories(config.output_dir);
  return std::filesystem::path(config.output_dir) / name;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : os_(path), path_(path) {
    if (!os_) throw Error("cannot open " + path.string() + " for writing");
    os_.precision(12);
    for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
    os_ << '\n';
  }

  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << values[i];
    os_ << '\n';
  }

  ~CsvWriter() = default;

  void close() {
    os_.close();
    if (!os_) throw Error("write failed: " + path_.string());
  }

 private:
  std::ofstream os_;
  std::filesystem::path path_;
};

json emitter_json(const RunConfig& config, const EmitterModel& m, double detuning_mhz, double bias,
                  const SequenceTiming& timing, double cal_residual) {
  const double fr = resonance_frequency(config.device.resonator, config.device.resonator.flux_at(bias));
  return {{"detuning_mhz", detuning_mhz},
          {"bias_volts", bias},
          {"resonator_ghz", fr * 1e-9},
          {"kappa_i_mhz", m.kappa_i / kTwoPi},
          {"kappa_c_mhz", m.kappa_c / kTwoPi},
          {"kappa_efficiency", internal_efficiency(m.kappa_i, m.kappa_c)},
          {"f0g1_amplitude", timing.f0g1_amplitude},
          {"f0g1_calibration_residual", cal_residual},
          {"window_tail_us", timing.tail_us}};
}

json simulation_json(const SimulationResult& r, const std::vector<CaptureBin>& bins) {
  json captured = json::object();
  for (std::size_t k = 0; k < bins.size(); ++k) captured[bins[k].label.name] = r.captured[k];
  return {{"captured", captured},
          {"internal_loss", r.internal_loss},
          {"output_loss", r.output_loss},
          {"transmon_decay", r.transmon_decay},
          {"resonator_residual", r.resonator_residual},
          {"initial_excitation", r.initial_excitation},
          {"final_excitation", r.final_excitation},
          {"uncovered_emission", r.uncovered_emission},
          {"accepted_steps", r.accepted_steps},
          {"rejected_steps", r.rejected_steps}};
}

void write_trajectory(const RunConfig& config, const std::string& name, const SimulationResult& r,
                      const std::vector<CaptureBin>& bins) {
  std::vector<std::string> header = {"t_us", "p_g", "p_e", "p_f", "n_resonator"};
  for (const auto& b : bins) header.push_back("n_" + b.label.name);
  CsvWriter csv(output_path(config, name), header);
  for (const auto& p : r.trajectory) {
    std::vector<double> row = {p.t, p.p_g, p.p_e, p.p_f, p.n_resonator};
    row.insert(row.end(), p.n_bins.begin(), p.n_bins.end());
    csv.row(row);
  }
  csv.close();
}

void write_records(const RunConfig& config, const std::string& stem, const QuadratureRecord& rec) {
  write_record(output_path(config, stem + ".bin").string(), rec);
  if (config.record_csv) write_record_csv(output_path(config, stem + ".csv").string(), rec);
}

json reconstruction_json(const TomographyResult& t, const MomentSet* moments) {
  json j = {{"rho", json::parse(density_matrix_json(t.reconstruction.rho))},
            {"projected", json::parse(density_matrix_json(t.projected))},
            {"fidelity", t.fidelity},
            {"clip", t.reconstruction.clip},
            {"residual", t.reconstruction.residual}};
  if (moments) j["moments"] = json::parse(moments_json(*moments));
  return j;
}

// Everything one emission run needs, for a given protocol builder.
struct Emission {
  double detuning_mhz = 0.0;
  double bias = 0.0;
  EmitterModel model;
  SequenceTiming timing;
  double cal_residual = 0.0;
  Protocol protocol;
  std::vector<CaptureBin> bins;
  SimulationResult result;
};

template <typename Build>
Emission simulate(const RunConfig& config, double detuning_mhz, double f0g1_ns, Build&& build) {
  Emission e;
  e.detuning_mhz = detuning_mhz;
  e.model = stage("device", [&] { return emitter_at(config, detuning_mhz, &e.bias); });
  e.timing = stage("calibrate", [&] { return timing_for(config, e.model, f0g1_ns, &e.cal_residual); });
  e.protocol = stage("sequence", [&] { return build(e.timing); });
  e.bins = stage("capture", [&] { return capture_bins(e.protocol, e.model); });
  e.result = stage("evolve", [&] {
    return evolve(DensityMatrix::vacuum(e.model.emitter_space()), e.protocol.sequence, e.model, e.bins,
                  evolve_options(config));
  });
  return e;
}

SamplingOptions sampling_options(const RunConfig& config) {
  SamplingOptions o;
  o.workers = config.workers;
  return o;
}

json tomography_with_bootstrap(const RunConfig& config, const QuadratureRecord& rec, const ReconstructionSpec& spec,
                               const Vector& target, std::uint64_t seed, const MomentSet* moments) {
  const TomographyResult t = stage("reconstruct", [&] { return reconstruct(rec, spec, target); });
  json j = reconstruction_json(t, moments);
  if (config.tomography.bootstrap > 0) {
    const BootstrapResult b = stage("bootstrap", [&] {
      return bootstrap_fidelity(rec, spec, target, config.tomography.bootstrap, seed, config.workers);
    });
    j["bootstrap"] = {{"resamples", config.tomography.bootstrap}, {"mean", b.mean}, {"std_error", b.std_error}};
  }
  return j;
}

}  // namespace

ReconstructionSpec field_spec(const RunConfig& config, std::size_t modes) {
  const int cap = config.tomography.photon_cap;
  ReconstructionSpec spec;
  spec.dims.assign(modes, cap + 1);
  spec.photon_cap = cap;
  spec.indices = moment_indices(std::vector<int>(modes, cap), cap);
  spec.moments.jackknife_blocks = config.tomography.jackknife_blocks;
  return spec;
}

std::vector<double> sweep_biases(const RunConfig& config) {
  if (!config.sweep.bias_volts.empty()) return config.sweep.bias_volts;
  const int n = config.sweep.points;
  if (n == 1) return {0.0};
  const double vmax = bias_for_detuning(config.device.resonator, config.sweep.max_detuning_mhz * 1e6);
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(-vmax + 2.0 * vmax * i / (n - 1));
  return out;
}

json run_sweep_spectrum(const RunConfig& config) {
  const std::vector<double> biases = sweep_biases(config);
  FluxSweepOptions opts;
  opts.points = config.sweep.trace_points;
  opts.half_span_linewidths = config.sweep.half_span_linewidths;
  opts.snr_db = config.sweep.snr_db;
  opts.seed = derive_seed(config.seed, kSweepNoiseStream);
  const FluxSweep sweep = stage("flux_sweep", [&] { return flux_sweep(config.device, biases, opts); });

  std::vector<ResonanceFit> fits(sweep.traces.size());
  stage("fit_s21", [&] {
    parallel_for(
        fits.size(), [&](std::size_t i) { fits[i] = fit_s21(sweep.traces[i]); }, config.workers);
    return 0;
  });

  json rows = json::array();
  CsvWriter csv(output_path(config, "sweep.csv"),
                {"bias_volts", "fr_ghz", "kappa_i_mhz", "kappa_c_mhz", "efficiency", "dip_depth", "true_fr_ghz"});
  double fmin = 0.0, fmax = 0.0;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    const auto& f = fits[i];
    const double bias = sweep.traces[i].bias_volts;
    const double truth =
        resonance_frequency(config.device.resonator, config.device.resonator.flux_at(bias)) * 1e-9;
    const double eff = internal_efficiency(f.kappa_i, f.kappa_c);
    csv.row({bias, f.fr_ghz, f.kappa_i / kTwoPi, f.kappa_c / kTwoPi, eff, f.dip_depth(), truth});
    json row = json::parse(fit_report_json(f));
    row["bias_volts"] = bias;
    rows.push_back(row);
    fmin = i == 0 ? f.fr_ghz : std::min(fmin, f.fr_ghz);
    fmax = i == 0 ? f.fr_ghz : std::max(fmax, f.fr_ghz);
  }
  csv.close();

  CsvWriter spectra(output_path(config, "spectra.csv"), {"bias_volts", "freq_hz", "abs_s21"});
  for (const auto& t : sweep.traces) {
    for (std::size_t k = 0; k < t.s21.size(); ++k) spectra.row({t.bias_volts, t.freq_ghz[k] * 1e9, std::abs(t.s21[k])});
  }
  spectra.close();

  json report;
  report["points"] = rows;
  report["tuning_range_mhz"] = (fmax - fmin) * 1e3;
  json skipped = json::array();
  for (const auto& [bias, why] : sweep.skipped) skipped.push_back({{"bias_volts", bias}, {"reason", why}});
  report["skipped"] = skipped;
  if (fits.size() >= 3) {
    const LinearRegression ki = stage("kappa_regression", [&] { return kappa_regression(fits, false); });
    const LinearRegression kc = stage("kappa_regression", [&] { return kappa_regression(fits, true); });
    auto line = [](const LinearRegression& r) {
      return json{{"slope_mhz_per_ghz", r.slope}, {"intercept_mhz", r.intercept}, {"r_squared", r.r_squared}};
    };
    report["regression"] = {{"kappa_i", line(ki)}, {"kappa_c", line(kc)}};
  } else {
    report["regression"] = nullptr;
  }
  return report;
}

json run_emit_photon(const RunConfig& config) {
  const Emission e = simulate(config, config.emit.detuning_mhz, config.emit.f0g1_ns,
                              [](const SequenceTiming& t) { return single_photon_protocol(t); });
  const DensityMatrix photon = stage("trace", [&] { return partial_trace(e.result.state, {std::string("p")}); });
  const QuadratureRecord rec = stage("sample", [&] {
    return sample_heterodyne(photon, config.noise, config.shots, derive_seed(config.seed, kSamplingStream),
                             sampling_options(config));
  });

  HistogramRange range;
  range.bins = config.emit.histogram_bins;
  range.extent = config.emit.histogram_extent;
  const RealMatrix hs = stage("histogram", [&] { return histogram2d(rec, "p", range); });
  const RealMatrix hv = stage("histogram", [&] { return histogram2d(rec, "p", range, true); });
  const RealMatrix hd = subtract_reference(hs, hv);
  CsvWriter csv(output_path(config, "histogram.csv"), {"re", "im", "signal", "vacuum", "difference"});
  const double w = 2.0 * range.extent / range.bins;
  for (int i = 0; i < range.bins; ++i) {
    for (int k = 0; k < range.bins; ++k) {
      csv.row({-range.extent + (i + 0.5) * w, -range.extent + (k + 0.5) * w, hs(i, k), hv(i, k), hd(i, k)});
    }
  }
  csv.close();
  write_trajectory(config, "trajectory.csv", e.result, e.bins);
  write_records(config, "record", rec);

  const ReconstructionSpec spec = field_spec(config, 1);
  const MomentSet moments = stage("moments", [&] { return estimate_moments(rec, spec.indices, spec.moments); });
  const Vector target = basis_vector(Space({ModeLabel("p", spec.dims[0])}), std::vector<int>{1});
  json tomo = tomography_with_bootstrap(config, rec, spec, target, derive_seed(config.seed, kBootstrapStream),
                                        &moments);

  const double transmissivity = config.noise.transmissivity();
  const double eta_k = internal_efficiency(e.model.kappa_i, e.model.kappa_c);
  const Complex n = moments.at({{1, 1}});
  json report;
  report["emitter"] = emitter_json(config, e.model, e.detuning_mhz, e.bias, e.timing, e.cal_residual);
  report["simulation"] = simulation_json(e.result, e.bins);
  report["detected_photon_number"] = {{"value", n.real()}, {"std_error", moments.error_at({{1, 1}})}};
  report["efficiency"] = {{"kappa_ratio", eta_k},
                          {"kappa_only_detected_bound", eta_k * transmissivity},
                          {"transmissivity", transmissivity},
                          {"end_to_end_simulated", e.result.captured[0]},
                          {"end_to_end_measured", n.real() / transmissivity}};
  report["tomography"] = tomo;
  return report;
}

json run_timebin(const RunConfig& config) {
  const auto& tb = config.timebin;
  const std::size_t n = tb.detuning_mhz.size();
  std::vector<json> points(n);
  std::vector<double> model_fid(n), tomo_fid(n), boot_mean(n), boot_err(n);
  std::vector<Emission> runs(n);
  stage("evolve", [&] {
    parallel_for(
        n,
        [&](std::size_t i) {
          runs[i] = simulate(config, tb.detuning_mhz[i], tb.f0g1_ns,
                             [&](const SequenceTiming& t) { return timebin_protocol(tb.theta, tb.entangle, t); });
        },
        config.workers);
    return 0;
  });

  for (std::size_t i = 0; i < n; ++i) {
    const Emission& e = runs[i];
    ReconstructionSpec spec = field_spec(config, 2);
    QuadratureRecord rec;
    Vector target;
    const std::uint64_t point_seed = derive_seed(config.seed, i);
    if (tb.entangle) {
      // Joint transmon-qubit and field state; the transmon's f level is
      // outside the encoding.
      const Space& full = e.result.state.space();
      const auto basis = single_photon_basis(full, {"E", "L"});
      model_fid[i] = fidelity(project_subspace(e.result.state, basis), timebin_target(full, tb.theta, true));
      rec = stage("sample", [&] {
        return sample_heterodyne_with_ancilla(e.result.state, "q", config.noise, config.shots,
                                              derive_seed(point_seed, kSamplingStream), sampling_options(config));
      });
      spec.joint = true;
      std::vector<ModeLabel> labels = {ModeLabel("q", 2)};
      for (int d : spec.dims) labels.emplace_back(labels.size() == 1 ? "E" : "L", d);
      const Space joint(labels);
      spec.projection = single_photon_basis(joint, {"E", "L"});
      target = timebin_target(joint, tb.theta, true);
    } else {
      const DensityMatrix field = partial_trace(e.result.state, {std::string("E"), std::string("L")});
      model_fid[i] = fidelity(project_subspace(field, single_photon_basis(field.space(), {"E", "L"})),
                              timebin_target(field.space(), tb.theta, false));
      rec = stage("sample", [&] {
        return sample_heterodyne(field, config.noise, config.shots, derive_seed(point_seed, kSamplingStream),
                                 sampling_options(config));
      });
      const Space space({ModeLabel("E", spec.dims[0]), ModeLabel("L", spec.dims[1])});
      spec.projection = single_photon_basis(space, {"E", "L"});
      target = timebin_target(space, tb.theta, false);
    }
    write_records(config, "record_" + std::to_string(i), rec);
    json tomo = tomography_with_bootstrap(config, rec, spec, target, derive_seed(point_seed, kBootstrapStream),
                                          nullptr);
    tomo_fid[i] = tomo["fidelity"].get<double>();
    boot_mean[i] = tomo.contains("bootstrap") ? tomo["bootstrap"]["mean"].get<double>() : tomo_fid[i];
    boot_err[i] = tomo.contains("bootstrap") ? tomo["bootstrap"]["std_error"].get<double>() : 0.0;
    points[i] = {{"emitter", emitter_json(config, e.model, e.detuning_mhz, e.bias, e.timing, e.cal_residual)},
                 {"simulation", simulation_json(e.result, e.bins)},
                 {"model_fidelity", model_fid[i]},
                 {"tomography", tomo}};
  }
  write_trajectory(config, "trajectory.csv", runs[0].result, runs[0].bins);

  CsvWriter csv(output_path(config, "fidelity.csv"),
                {"detuning_mhz", "bias_volts", "kappa_i_mhz", "kappa_c_mhz", "kappa_efficiency", "captured_E",
                 "captured_L", "model_fidelity", "tomography_fidelity", "bootstrap_mean", "bootstrap_std"});
  for (std::size_t i = 0; i < n; ++i) {
    const Emission& e = runs[i];
    csv.row({e.detuning_mhz, e.bias, e.model.kappa_i / kTwoPi, e.model.kappa_c / kTwoPi,
             internal_efficiency(e.model.kappa_i, e.model.kappa_c), e.result.captured[0], e.result.captured[1],
             model_fid[i], tomo_fid[i], boot_mean[i], boot_err[i]});
  }
  csv.close();

  json report;
  report["points"] = points;
  const auto [lo, hi] = std::minmax_element(model_fid.begin(), model_fid.end());
  report["summary"] = {{"min_model_fidelity", *lo},
                       {"max_model_fidelity", *hi},
                       {"model_fidelity_spread", *hi - *lo},
                       {"min_tomography_fidelity", *std::min_element(tomo_fid.begin(), tomo_fid.end())}};
  return report;
}

json run_qutrit(const RunConfig& config) {
  const auto& q = config.qutrit;
  const Emission e = simulate(config, q.detuning_mhz, q.f0g1_ns,
                              [&](const SequenceTiming& t) { return qutrit_protocol(q.theta, q.phi, t); });
  const std::vector<std::string> modes = {"a", "b", "c"};
  const DensityMatrix field = stage("trace", [&] { return partial_trace(e.result.state, modes); });
  const auto basis = single_photon_basis(field.space(), modes);
  const DensityMatrix projected = project_subspace(field, basis);
  const double model_fid = fidelity(projected, qutrit_target(field.space(), q.theta, q.phi));

  const QuadratureRecord rec = stage("sample", [&] {
    return sample_heterodyne(field, config.noise, config.shots, derive_seed(config.seed, kSamplingStream),
                             sampling_options(config));
  });
  write_records(config, "record", rec);
  write_trajectory(config, "trajectory.csv", e.result, e.bins);
  ReconstructionSpec spec = field_spec(config, 3);
  const Space space({ModeLabel("a", spec.dims[0]), ModeLabel("b", spec.dims[1]), ModeLabel("c", spec.dims[2])});
  spec.projection = single_photon_basis(space, modes);
  json tomo = tomography_with_bootstrap(config, rec, spec, qutrit_target(space, q.theta, q.phi),
                                        derive_seed(config.seed, kBootstrapStream), nullptr);

  json populations = json::object();
  for (std::size_t k = 0; k < modes.size(); ++k) {
    std::vector<int> occ(3, 0);
    occ[k] = 1;
    const int idx = field.space().index(occ);
    populations[modes[k]] = projected.matrix()(idx, idx).real();
  }
  json report;
  report["emitter"] = emitter_json(config, e.model, e.detuning_mhz, e.bias, e.timing, e.cal_residual);
  report["simulation"] = simulation_json(e.result, e.bins);
  report["model_fidelity"] = model_fid;
  report["model_populations"] = populations;
  report["tomography"] = tomo;
  return report;
}

json run_fit_s21(const RunConfig& config) {
  const S21Trace raw = stage("load", [&] { return read_trace_csv(config.fit.trace); });
  Background bg;
  bg.scale = Complex(config.fit.background_re, config.fit.background_im);
  bg.delay_ns = config.fit.delay_ns;
  const S21Trace trace = stage("normalize", [&] { return normalize_trace(raw, bg); });
  const ResonanceFit fit = stage("fit_s21", [&] { return fit_s21(trace); });
  CsvWriter csv(output_path(config, "fit_curve.csv"), {"freq_hz", "re_s21", "im_s21", "re_model", "im_model"});
  for (std::size_t i = 0; i < trace.s21.size(); ++i) {
    const Complex m = s21_model(trace.freq_ghz[i], fit);
    csv.row({trace.freq_ghz[i] * 1e9, trace.s21[i].real(), trace.s21[i].imag(), m.real(), m.imag()});
  }
  csv.close();
  json report;
  report["fit"] = json::parse(fit_report_json(fit));
  report["points"] = trace.s21.size();
  return report;
}

json run_pipeline(const RunConfig& config, const Overrides& overrides) {
  json report;
  if (config.pipeline == "sweep-spectrum") {
    report = run_sweep_spectrum(config);
  } else if (config.pipeline == "emit-photon") {
    report = run_emit_photon(config);
  } else if (config.pipeline == "timebin") {
    report = run_timebin(config);
  } else if (config.pipeline == "qutrit") {
    report = run_qutrit(config);
  } else if (config.pipeline == "fit-s21") {
    report = run_fit_s21(config);
  } else {
    throw StageError("config", "unknown pipeline '" + config.pipeline + "'");
  }
  report["pipeline"] = config.pipeline;
  report["config"] = to_json(config);
  report["overrides"] = overrides.to_json();
  report["versions"] = {{"qlight", version_string()},
                        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                      "." + std::to_string(EIGEN_MINOR_VERSION)},
                        {"report_format", 1}};
  return report;
}

}  // namespace qlight::app
