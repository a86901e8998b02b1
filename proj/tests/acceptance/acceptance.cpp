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

// Acceptance run: every criterion at its stated tolerance, one PASS/FAIL
// line each. Exit status is non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "pipelines.hpp"
#include "qlight/spectro.hpp"
#include "qlight/tomography.hpp"

namespace qlight {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kMHz = kTwoPi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

fs::path output_dir(const std::string& name) { return fs::temp_directory_path() / ("qlight_acceptance_" + name); }

app::RunConfig config_for(const std::string& pipeline, json doc, const std::string& name) {
  doc["seed"] = doc.value("seed", 2026);
  doc["output_dir"] = output_dir(name).string();
  return app::parse_config(doc, pipeline, {});
}

EmitterModel sweet_spot_emitter(bool decoherence) {
  EmitterModel m;
  m.kappa_c = 2.49 * kMHz;
  m.kappa_i = 0.51 * kMHz;
  if (decoherence) m.transmon = decoherence_rates(TransmonParams{});
  return m;
}

DensityMatrix excited_f(const EmitterModel& m) {
  const std::vector<int> occ = {2, 0};
  return DensityMatrix::basis(m.emitter_space(), occ);
}

// Evolves one f0g1 pulse from |f,0> into a single matched bin.
SimulationResult single_bin_run(const EmitterModel& m, const Envelope& pulse, double window,
                                EmissionMode* mode_out = nullptr) {
  PulseSequence seq;
  seq.add(Channel::f0g1, pulse, 0.0);
  Envelope reference = pulse;
  reference.phase = 0.0;
  const EmissionMode mode = emission_mode(m, reference, window);
  if (mode_out) *mode_out = mode;
  const std::vector<CaptureBin> bins = {make_capture_bin(ModeLabel("p", 2), 0.0, window, mode, m.capture_rate_cap)};
  return evolve(excited_f(m), seq, m, bins);
}

void efficiency_identities(Outcome& o) {
  const double a = internal_efficiency(0.51, 2.49);
  const double b = internal_efficiency(1.48, 1.45);
  o.detail << "eta(sweet spot) = " << a << ", eta(-120 MHz) = " << b;
  o.check(std::abs(a - 0.830) <= 0.001, "sweet-spot efficiency");
  o.check(std::abs(b - 0.495) <= 0.001, "detuned efficiency");
}

void branching_ratio(Outcome& o) {
  const EmitterModel m = sweet_spot_emitter(false);
  const double expected = internal_efficiency(m.kappa_i, m.kappa_c);
  o.detail << "expected " << expected << ";";
  for (double duration : {0.2, 0.4, 1.0}) {
    const double amp = calibrate_f0g1_amplitude(m, duration).amplitude;
    const SimulationResult r = single_bin_run(m, f0g1_pulse(duration, amp), duration + 10.0 / m.kappa());
    const double transferred = 1.0 - r.state.matrix()(2, 2).real();
    const double ratio = r.captured[0] / transferred;
    o.detail << " " << duration * 1e3 << " ns: " << ratio;
    o.check(std::abs(ratio - expected) <= 0.01 * expected, std::to_string(duration) + " us");
  }
}

void detected_photon_number(Outcome& o) {
  const app::RunConfig c = config_for("emit-photon", json{{"shots", 200000}}, "emit");
  const json r = app::run_emit_photon(c);
  const double n = r["detected_photon_number"]["value"].get<double>();
  const double bound = r["efficiency"]["kappa_only_detected_bound"].get<double>();
  o.detail << "detected <a^dag a> = " << n << " +- " << r["detected_photon_number"]["std_error"].get<double>()
           << ", kappa-only bound = " << bound;
  o.check(n >= 0.36 && n <= 0.46, "detected photon number in [0.36, 0.46]");
  o.check(std::abs(bound - 0.415) < 0.0005, "kappa-only bound 0.415");
}

void loss_invariance(Outcome& o) {
  app::RunConfig c = config_for("timebin", json{{"timebin", {{"detuning_mhz", {0.0}}}}}, "invariance");
  const EmitterModel m = app::emitter_at(c, 0.0);
  const SequenceTiming timing = app::timing_for(c, m, c.timebin.f0g1_ns);
  const Protocol p = timebin_protocol(c.timebin.theta, false, timing);
  const SimulationResult r =
      evolve(DensityMatrix::vacuum(m.emitter_space()), p.sequence, m, capture_bins(p, m), app::evolve_options(c));
  const DensityMatrix field = partial_trace(r.state, {std::string("E"), std::string("L")});
  const auto basis = single_photon_basis(field.space(), {"E", "L"});
  const Vector target = timebin_target(field.space(), c.timebin.theta, false);
  const double f1 = fidelity(project_subspace(field, basis), target);
  double worst = 0.0;
  for (double eta : {1.0, 0.828, 0.386}) {
    const DensityMatrix lossy = apply_loss(apply_loss(field, "E", eta), "L", eta);
    const double f = fidelity(project_subspace(lossy, basis), target);
    worst = std::max(worst, std::abs(f - f1));
  }
  o.detail << "projected fidelity " << f1 << ", max |dF| = " << worst;
  o.check(worst < 1e-9, "|dF| < 1e-9");
}

void flatness(Outcome& o) {
  const app::RunConfig c = config_for(
      "timebin", json{{"tomography", {{"bootstrap", 0}}}, {"timebin", {{"detuning_mhz", {0.0, 30.0, 60.0, 90.0, 120.0}}}}},
      "flatness");
  const json r = app::run_timebin(c);
  o.detail << "model fidelities:";
  for (const auto& pt : r["points"]) {
    o.detail << " " << pt["emitter"]["detuning_mhz"].get<double>() << " MHz " << pt["model_fidelity"].get<double>();
  }
  const double lo = r["summary"]["min_model_fidelity"].get<double>();
  const double spread = r["summary"]["model_fidelity_spread"].get<double>();
  o.detail << "; spread " << spread << "; min tomography fidelity "
           << r["summary"]["min_tomography_fidelity"].get<double>();
  o.check(lo > 0.90, "every fidelity > 0.90");
  o.check(spread < 0.05, "spread < 0.05");
}

void fidelity_anchors(Outcome& o) {
  const json common = {{"tomography", {{"bootstrap", 0}}}};
  json tb = common;
  tb["timebin"] = {{"detuning_mhz", {0.0}}};
  const json qubit = app::run_timebin(config_for("timebin", tb, "anchor_timebin"));
  tb["timebin"]["entangle"] = true;
  const json bell = app::run_timebin(config_for("timebin", tb, "anchor_bell"));
  const json qutrit = app::run_qutrit(config_for("qutrit", common, "anchor_qutrit"));
  const double f_tb = qubit["points"][0]["model_fidelity"].get<double>();
  const double f_bell = bell["points"][0]["model_fidelity"].get<double>();
  const double f_q = qutrit["model_fidelity"].get<double>();
  o.detail << "F_timebin = " << f_tb << " (tomography " << qubit["points"][0]["tomography"]["fidelity"].get<double>()
           << "), F_Bell = " << f_bell << " (tomography " << bell["points"][0]["tomography"]["fidelity"].get<double>()
           << "), F_qutrit = " << f_q << " (tomography " << qutrit["tomography"]["fidelity"].get<double>() << ")";
  o.check(f_tb >= 0.92 - 0.03, "F_timebin >= 0.89");
  o.check(f_bell >= 0.7384 - 0.03, "F_Bell >= 0.7084");
  o.check(f_q >= 0.6919 - 0.03, "F_qutrit >= 0.6619");
}

void tomography_round_trip(Outcome& o) {
  gen::Engine rng(7);
  double worst = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const Space s = gen::space(rng, gen::integer(rng, 1, 2), 3);
    std::vector<int> dims, powers;
    for (const auto& m : s.modes()) {
      dims.push_back(m.dim);
      powers.push_back(m.dim - 1);
    }
    const DensityMatrix rho(s, gen::density(rng, s.dimension()));
    const Reconstruction r = rho_from_moments(exact_moments(rho, moment_indices(powers)), dims);
    worst = std::max(worst, gen::max_abs(r.rho.matrix() - rho.matrix()));
  }
  o.detail << "exact inversion max error " << worst;
  o.check(worst < 1e-10, "exact inversion to 1e-10");

  const Space one({ModeLabel("p", 2)});
  NoiseModel noise;
  noise.added_quanta = 2.0;
  noise.detection_efficiency = 0.828;
  noise.split = 1.0;
  const QuadratureRecord rec = sample_heterodyne(DensityMatrix::basis(one, std::vector<int>{1}), noise, 1000000, 8);
  ReconstructionSpec spec;
  spec.dims = {2};
  spec.indices = moment_indices({1});
  Vector target = Vector::Zero(2);
  target(1) = 1.0;
  const double rho11 = reconstruct(rec, spec, target).reconstruction.rho.matrix()(1, 1).real();
  o.detail << "; sampled rho11 = " << rho11 << " (expected 0.828)";
  o.check(std::abs(rho11 - 0.828) <= 0.02, "sampled Fock-1 within 0.02");
}

void spectroscopy(Outcome& o) {
  ResonanceFit truth;
  truth.fr_ghz = 6.6;
  truth.kappa_i = 0.51 * kMHz;
  truth.kappa_c = 2.49 * kMHz;
  const double half = 10.0 * (truth.kappa_i + truth.kappa_c) / kMHz * 1e-3;
  std::vector<double> grid;
  for (int i = 0; i < 401; ++i) grid.push_back(truth.fr_ghz - half + 2.0 * half * i / 400.0);

  const ResonanceFit exact = fit_s21(synthesize_trace(truth, grid));
  const double rel = std::max({std::abs(exact.fr_ghz / truth.fr_ghz - 1.0), std::abs(exact.kappa_i / truth.kappa_i - 1.0),
                               std::abs(exact.kappa_c / truth.kappa_c - 1.0)});
  o.detail << "noiseless max relative error " << rel;
  o.check(rel <= 1e-6, "noiseless round trip 1e-6");

  double ki = 0.0, kc = 0.0, fr = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const ResonanceFit f = fit_s21(synthesize_trace(truth, grid, 20.0, seed));
    ki += f.kappa_i / 100.0;
    kc += f.kappa_c / 100.0;
    fr += f.fr_ghz / 100.0;
  }
  const double noisy = std::max({std::abs(ki / truth.kappa_i - 1.0), std::abs(kc / truth.kappa_c - 1.0),
                                 std::abs(fr / truth.fr_ghz - 1.0)});
  o.detail << "; 20 dB mean over 100 seeds max relative error " << noisy;
  o.check(noisy <= 0.02, "20 dB within 2%");

  const app::RunConfig c = config_for("sweep-spectrum", json::object(), "sweep");
  const json sweep = app::run_sweep_spectrum(c);
  const double range = sweep["tuning_range_mhz"].get<double>();
  o.detail << "; tuning range " << range << " MHz";
  o.check(range >= 200.0, "range >= 200 MHz");

  const DeviceModel device;
  const double v120 = bias_for_detuning(device.resonator, 120e6);
  const FluxSweep anchors = flux_sweep(device, {0.0, v120});
  const double d0 = fit_s21(anchors.traces[0]).dip_depth();
  const double d1 = fit_s21(anchors.traces[1]).dip_depth();
  o.detail << "; dip depths " << d0 << " and " << d1;
  o.check(std::abs(d0 - 0.17) < 0.001, "sweet-spot dip 0.17");
  o.check(std::abs(d1 - 0.505) < 0.001, "detuned dip 0.505");
}

void qutrit_analytics(Outcome& o) {
  const double theta = std::atan(2.0 * std::sqrt(2.0));
  const Space s({ModeLabel("a", 2), ModeLabel("b", 2), ModeLabel("c", 2)});
  const Vector psi = qutrit_target(s, theta, kPi / 2);
  double worst = 0.0;
  for (const std::vector<int>& occ : {std::vector<int>{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}) {
    worst = std::max(worst, std::abs(std::norm(psi(s.index(occ))) - 1.0 / 3.0));
  }
  o.detail << "ideal population error " << worst;
  o.check(worst < 1e-12, "populations 1/3");

  const json doc = {{"emitter", {{"decoherence", false}, {"internal_loss", false}}},
                    {"pulses", {{"tail_linewidths", 15.0}}},
                    {"tomography", {{"bootstrap", 0}}},
                    {"shots", 20000}};
  const json r = app::run_qutrit(config_for("qutrit", doc, "qutrit_ideal"));
  const double f = r["model_fidelity"].get<double>();
  o.detail << "; noiseless fidelity " << f << ", populations " << r["model_populations"].dump();
  o.check(std::abs(f - 1.0) <= 1e-3, "noiseless fidelity 1 +- 1e-3");
}

void oracle_equivalence(Outcome& o) {
  gen::Engine rng(10);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    EmitterModel m;
    m.kappa_c = gen::uniform(rng, 1.0, 3.0) * kMHz;
    m.kappa_i = gen::uniform(rng, 0.0, 1.5) * kMHz;
    if (trial % 2 == 0) m.transmon = decoherence_rates(TransmonParams{});
    const double duration = gen::uniform(rng, 0.2, 0.6);
    const double truncation = gen::uniform(rng, 0.5, 1.0);
    const double amp = calibrate_f0g1_amplitude(m, duration, truncation).amplitude * gen::uniform(rng, 0.6, 1.0);
    const Envelope pulse = f0g1_pulse(duration, amp, gen::uniform(rng, 0.0, kTwoPi), truncation);
    const double window = duration + 5.0 / m.kappa();
    EmissionMode mode;
    const SimulationResult r = single_bin_run(m, pulse, window, &mode);
    const double n = oracle::matched_filter_photons(m, pulse, excited_f(m).matrix(), mode, window, 5e-4);
    worst = std::max(worst, std::abs(r.captured[0] - n) / n);
  }
  o.detail << "max relative deviation from the oracle over 10 drives " << worst;
  o.check(worst <= 0.01, "within 1%");
}

}  // namespace
}  // namespace qlight

int main() {
  using qlight::Outcome;
  struct Criterion {
    const char* name;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria = {
      {"1 efficiency identities", qlight::efficiency_identities},
      {"2 branching ratio", qlight::branching_ratio},
      {"3 detected photon number", qlight::detected_photon_number},
      {"4 loss invariance of time-bin encoding", qlight::loss_invariance},
      {"5 fidelity flatness over frequency", qlight::flatness},
      {"6 fidelity anchors", qlight::fidelity_anchors},
      {"7 tomography round trip", qlight::tomography_round_trip},
      {"8 spectroscopy", qlight::spectroscopy},
      {"9 qutrit analytics", qlight::qutrit_analytics},
      {"10 oracle equivalence", qlight::oracle_equivalence},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "[exception: " << e.what() << "]";
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  criterion %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.str().c_str(), wall);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
