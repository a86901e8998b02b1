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

#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace qlight::app {

using nlohmann::json;

namespace {

// Reads keys of one JSON object into typed fields and rejects keys nobody
// asked for.
class Section {
 public:
  Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_null() && !obj_.is_object()) throw ConfigError(where("") + " must be an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (obj_.is_null() || !obj_.contains(key)) return;
    try {
      out = obj_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(where(key) + " has the wrong type");
    }
  }

  template <typename T>
  void get(const char* key, std::optional<T>& out) {
    seen_.insert(key);
    if (obj_.is_null() || !obj_.contains(key)) return;
    if (obj_.at(key).is_null()) {
      out.reset();
      return;
    }
    T v{};
    get(key, v);
    out = v;
  }

  Section child(const char* key) {
    seen_.insert(key);
    static const json kNull;
    return Section(obj_.is_null() || !obj_.contains(key) ? kNull : obj_.at(key), where(key));
  }

  bool has(const char* key) const { return !obj_.is_null() && obj_.contains(key); }

  void finish() const {
    if (obj_.is_null()) return;
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) throw ConfigError("unknown configuration key " + where(key));
    }
  }

 private:
  std::string where(const std::string& key) const {
    if (key.empty()) return path_.empty() ? "configuration" : "'" + path_ + "'";
    return "'" + (path_.empty() ? key : path_ + "." + key) + "'";
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

nlohmann::json Overrides::to_json() const {
  json j = json::object();
  if (seed) j["seed"] = *seed;
  if (shots) j["shots"] = *shots;
  if (output_dir) j["output_dir"] = *output_dir;
  if (trace) j["fit.trace"] = *trace;
  return j;
}

void RunConfig::validate() const {
  static const std::set<std::string> kPipelines = {"sweep-spectrum", "emit-photon", "timebin", "qutrit", "fit-s21"};
  require(kPipelines.count(pipeline) == 1, "unknown pipeline '" + pipeline + "'");
  require(shots >= 1, "shots must be >= 1");
  require(workers >= 1, "workers must be >= 1");
  try {
    device.transmon.validate();
    device.resonator.validate();
    noise.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  require(emitter.resonator_dim >= 2, "emitter.resonator_dim must be >= 2");
  require(emitter.f0g1_scale > 0.0, "emitter.f0g1_scale must be positive");
  require(emitter.capture_rate_cap > 0.0, "emitter.capture_rate_cap must be positive");
  require(!emitter.t1_ge_override_us || *emitter.t1_ge_override_us > 0.0, "emitter.t1_ge_override_us must be positive");
  require(!emitter.t1_ef_override_us || *emitter.t1_ef_override_us > 0.0, "emitter.t1_ef_override_us must be positive");
  require(pulses.rotation_ns > 0.0, "pulses.rotation_ns must be positive");
  require(pulses.truncation > 0.0 && pulses.truncation <= 1.0, "pulses.truncation must lie in (0, 1]");
  require(pulses.tail_linewidths >= 0.0, "pulses.tail_linewidths must be non-negative");
  require(evolve.max_step_us > 0.0 && evolve.tolerance > 0.0, "evolve step and tolerance must be positive");
  require(tomography.bootstrap == 0 || tomography.bootstrap >= 100, "tomography.bootstrap must be 0 or >= 100");
  require(tomography.jackknife_blocks >= 2, "tomography.jackknife_blocks must be >= 2");
  require(tomography.photon_cap >= 1, "tomography.photon_cap must be >= 1");
  require(sweep.points >= 1, "sweep.points must be >= 1");
  require(sweep.trace_points >= 50, "sweep.trace_points must be >= 50");
  require(emit.f0g1_ns > 0.0 && timebin.f0g1_ns > 0.0 && qutrit.f0g1_ns > 0.0, "f0g1 durations must be positive");
  require(emit.histogram_bins >= 1 && emit.histogram_extent > 0.0, "histogram binning must be positive");
  require(!timebin.detuning_mhz.empty(), "timebin.detuning_mhz must not be empty");
  require(timebin.theta >= 0.0 && timebin.theta <= kPi, "timebin.theta must lie in [0, pi]");
  require(qutrit.theta >= 0.0 && qutrit.theta <= kPi, "qutrit.theta must lie in [0, pi]");
  require(qutrit.phi >= 0.0 && qutrit.phi <= kPi, "qutrit.phi must lie in [0, pi]");
  if (pipeline == "fit-s21") require(!fit.trace.empty(), "fit-s21 needs fit.trace (or --trace)");
}

RunConfig parse_config(const json& doc, const std::string& pipeline, const Overrides& overrides) {
  RunConfig c;
  Section root(doc, "");
  std::string file_pipeline;
  root.get("pipeline", file_pipeline);
  if (!file_pipeline.empty() && file_pipeline != pipeline) {
    throw ConfigError("configuration is for pipeline '" + file_pipeline + "', not '" + pipeline + "'");
  }
  c.pipeline = pipeline;
  std::optional<std::uint64_t> seed;
  root.get("seed", seed);
  root.get("shots", c.shots);
  root.get("output_dir", c.output_dir);
  root.get("workers", c.workers);
  root.get("record_csv", c.record_csv);

  {
    Section dev = root.child("device");
    Section t = dev.child("transmon");
    t.get("f_ge_ghz", c.device.transmon.f_ge_ghz);
    t.get("ec_mhz", c.device.transmon.ec_mhz);
    t.get("t1_ge_us", c.device.transmon.t1_ge_us);
    t.get("t1_ef_us", c.device.transmon.t1_ef_us);
    t.get("t2_ge_us", c.device.transmon.t2_ge_us);
    t.get("t2_ef_us", c.device.transmon.t2_ef_us);
    t.finish();
    Section r = dev.child("resonator");
    r.get("l0_h", c.device.resonator.l0_h);
    r.get("c0_f", c.device.resonator.c0_f);
    r.get("lj0_h", c.device.resonator.lj0_h);
    r.get("flux_per_volt", c.device.resonator.flux_per_volt);
    r.get("flux_offset", c.device.resonator.flux_offset);
    r.get("asymmetry", c.device.resonator.asymmetry);
    r.get("sweet_spot_ghz", c.device.resonator.sweet_spot_ghz);
    r.finish();
    Section l = dev.child("loss");
    l.get("f_ref_ghz", c.device.loss.f_ref_ghz);
    l.get("kappa_i_intercept_mhz", c.device.loss.kappa_i_intercept_mhz);
    l.get("kappa_i_slope_mhz_per_ghz", c.device.loss.kappa_i_slope_mhz_per_ghz);
    l.get("kappa_c_intercept_mhz", c.device.loss.kappa_c_intercept_mhz);
    l.get("kappa_c_slope_mhz_per_ghz", c.device.loss.kappa_c_slope_mhz_per_ghz);
    l.get("window_below_ghz", c.device.loss.window_below_ghz);
    l.get("window_above_ghz", c.device.loss.window_above_ghz);
    l.finish();
    dev.finish();
  }
  {
    Section n = root.child("noise");
    n.get("added_quanta", c.noise.added_quanta);
    n.get("detection_efficiency", c.noise.detection_efficiency);
    n.get("split", c.noise.split);
    n.finish();
  }
  {
    Section e = root.child("emitter");
    e.get("decoherence", c.emitter.decoherence);
    e.get("internal_loss", c.emitter.internal_loss);
    e.get("resonator_dim", c.emitter.resonator_dim);
    e.get("f0g1_scale", c.emitter.f0g1_scale);
    e.get("capture_rate_cap", c.emitter.capture_rate_cap);
    e.get("t1_ge_override_us", c.emitter.t1_ge_override_us);
    e.get("t1_ef_override_us", c.emitter.t1_ef_override_us);
    e.finish();
  }
  {
    Section p = root.child("pulses");
    p.get("rotation_ns", c.pulses.rotation_ns);
    p.get("truncation", c.pulses.truncation);
    p.get("drag", c.pulses.drag);
    p.get("tail_linewidths", c.pulses.tail_linewidths);
    p.get("f0g1_amplitude", c.pulses.f0g1_amplitude);
    p.finish();
  }
  {
    Section e = root.child("evolve");
    e.get("max_step_us", c.evolve.max_step_us);
    e.get("tolerance", c.evolve.tolerance);
    e.finish();
  }
  {
    Section t = root.child("tomography");
    t.get("bootstrap", c.tomography.bootstrap);
    t.get("jackknife_blocks", c.tomography.jackknife_blocks);
    t.get("photon_cap", c.tomography.photon_cap);
    t.finish();
  }
  {
    Section s = root.child("sweep");
    s.get("bias_volts", c.sweep.bias_volts);
    s.get("max_detuning_mhz", c.sweep.max_detuning_mhz);
    s.get("points", c.sweep.points);
    s.get("trace_points", c.sweep.trace_points);
    s.get("half_span_linewidths", c.sweep.half_span_linewidths);
    s.get("snr_db", c.sweep.snr_db);
    s.finish();
  }
  {
    Section e = root.child("emit");
    e.get("detuning_mhz", c.emit.detuning_mhz);
    e.get("f0g1_ns", c.emit.f0g1_ns);
    e.get("histogram_bins", c.emit.histogram_bins);
    e.get("histogram_extent", c.emit.histogram_extent);
    e.finish();
  }
  {
    Section t = root.child("timebin");
    t.get("theta", c.timebin.theta);
    t.get("entangle", c.timebin.entangle);
    t.get("detuning_mhz", c.timebin.detuning_mhz);
    t.get("f0g1_ns", c.timebin.f0g1_ns);
    t.finish();
  }
  {
    Section q = root.child("qutrit");
    q.get("theta", c.qutrit.theta);
    q.get("phi", c.qutrit.phi);
    q.get("detuning_mhz", c.qutrit.detuning_mhz);
    q.get("f0g1_ns", c.qutrit.f0g1_ns);
    q.finish();
  }
  {
    Section f = root.child("fit");
    f.get("trace", c.fit.trace);
    f.get("background_re", c.fit.background_re);
    f.get("background_im", c.fit.background_im);
    f.get("delay_ns", c.fit.delay_ns);
    f.finish();
  }
  root.finish();

  if (overrides.seed) seed = overrides.seed;
  if (overrides.shots) c.shots = *overrides.shots;
  if (overrides.output_dir) c.output_dir = *overrides.output_dir;
  if (overrides.trace) c.fit.trace = *overrides.trace;
  if (!seed) throw ConfigError("a seed is required (config 'seed' or --seed)");
  c.seed = *seed;
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path, const std::string& pipeline, const Overrides& overrides) {
  if (path.empty()) return parse_config(json(nullptr), pipeline, overrides);
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open configuration " + path);
  json doc = json::parse(is, nullptr, false, true);
  if (doc.is_discarded()) throw ConfigError("configuration " + path + " is not valid JSON");
  return parse_config(doc, pipeline, overrides);
}

json to_json(const RunConfig& c) {
  json j;
  j["pipeline"] = c.pipeline;
  j["seed"] = c.seed;
  j["shots"] = c.shots;
  j["output_dir"] = c.output_dir;
  j["workers"] = c.workers;
  j["record_csv"] = c.record_csv;
  const auto& t = c.device.transmon;
  const auto& r = c.device.resonator;
  const auto& l = c.device.loss;
  j["device"] = {
      {"transmon",
       {{"f_ge_ghz", t.f_ge_ghz}, {"ec_mhz", t.ec_mhz}, {"t1_ge_us", t.t1_ge_us}, {"t1_ef_us", t.t1_ef_us},
        {"t2_ge_us", t.t2_ge_us}, {"t2_ef_us", t.t2_ef_us}}},
      {"resonator",
       {{"l0_h", r.l0_h}, {"c0_f", r.c0_f}, {"lj0_h", r.lj0_h}, {"flux_per_volt", r.flux_per_volt},
        {"flux_offset", r.flux_offset}, {"asymmetry", r.asymmetry}, {"sweet_spot_ghz", r.sweet_spot_ghz}}},
      {"loss",
       {{"f_ref_ghz", l.f_ref_ghz}, {"kappa_i_intercept_mhz", l.kappa_i_intercept_mhz},
        {"kappa_i_slope_mhz_per_ghz", l.kappa_i_slope_mhz_per_ghz},
        {"kappa_c_intercept_mhz", l.kappa_c_intercept_mhz},
        {"kappa_c_slope_mhz_per_ghz", l.kappa_c_slope_mhz_per_ghz}, {"window_below_ghz", l.window_below_ghz},
        {"window_above_ghz", l.window_above_ghz}}}};
  j["noise"] = {{"added_quanta", c.noise.added_quanta},
                {"detection_efficiency", c.noise.detection_efficiency},
                {"split", c.noise.split}};
  j["emitter"] = {{"decoherence", c.emitter.decoherence},
                  {"internal_loss", c.emitter.internal_loss},
                  {"resonator_dim", c.emitter.resonator_dim},
                  {"f0g1_scale", c.emitter.f0g1_scale},
                  {"capture_rate_cap", c.emitter.capture_rate_cap},
                  {"t1_ge_override_us", opt(c.emitter.t1_ge_override_us)},
                  {"t1_ef_override_us", opt(c.emitter.t1_ef_override_us)}};
  j["pulses"] = {{"rotation_ns", c.pulses.rotation_ns},
                 {"truncation", c.pulses.truncation},
                 {"drag", c.pulses.drag},
                 {"tail_linewidths", c.pulses.tail_linewidths},
                 {"f0g1_amplitude", opt(c.pulses.f0g1_amplitude)}};
  j["evolve"] = {{"max_step_us", c.evolve.max_step_us}, {"tolerance", c.evolve.tolerance}};
  j["tomography"] = {{"bootstrap", c.tomography.bootstrap},
                     {"jackknife_blocks", c.tomography.jackknife_blocks},
                     {"photon_cap", c.tomography.photon_cap}};
  j["sweep"] = {{"bias_volts", c.sweep.bias_volts},
                {"max_detuning_mhz", c.sweep.max_detuning_mhz},
                {"points", c.sweep.points},
                {"trace_points", c.sweep.trace_points},
                {"half_span_linewidths", c.sweep.half_span_linewidths},
                {"snr_db", opt(c.sweep.snr_db)}};
  j["emit"] = {{"detuning_mhz", c.emit.detuning_mhz},
               {"f0g1_ns", c.emit.f0g1_ns},
               {"histogram_bins", c.emit.histogram_bins},
               {"histogram_extent", c.emit.histogram_extent}};
  j["timebin"] = {{"theta", c.timebin.theta},
                  {"entangle", c.timebin.entangle},
                  {"detuning_mhz", c.timebin.detuning_mhz},
                  {"f0g1_ns", c.timebin.f0g1_ns}};
  j["qutrit"] = {{"theta", c.qutrit.theta},
                 {"phi", c.qutrit.phi},
                 {"detuning_mhz", c.qutrit.detuning_mhz},
                 {"f0g1_ns", c.qutrit.f0g1_ns}};
  j["fit"] = {{"trace", c.fit.trace},
              {"background_re", c.fit.background_re},
              {"background_im", c.fit.background_im},
              {"delay_ns", c.fit.delay_ns}};
  return j;
}

EmitterModel emitter_at(const RunConfig& config, double detuning_mhz, double* bias_volts) {
  const double bias = detuning_mhz == 0.0 ? 0.0 : bias_for_detuning(config.device.resonator, detuning_mhz * 1e6);
  if (bias_volts) *bias_volts = bias;
  EmitterModel m = EmitterModel::from_device(config.device, bias, config.emitter.decoherence);
  if (!config.emitter.internal_loss) m.kappa_i = 0.0;
  m.resonator_dim = config.emitter.resonator_dim;
  m.f0g1_scale = config.emitter.f0g1_scale;
  m.capture_rate_cap = config.emitter.capture_rate_cap;
  if (config.emitter.decoherence) {
    if (config.emitter.t1_ge_override_us) m.transmon.ge.relax = 1.0 / *config.emitter.t1_ge_override_us;
    if (config.emitter.t1_ef_override_us) m.transmon.ef.relax = 1.0 / *config.emitter.t1_ef_override_us;
  }
  m.validate();
  return m;
}

SequenceTiming timing_for(const RunConfig& config, const EmitterModel& model, double f0g1_ns,
                          double* calibration_residual) {
  SequenceTiming t;
  t.rotation_us = config.pulses.rotation_ns * 1e-3;
  t.f0g1_us = f0g1_ns * 1e-3;
  t.truncation = config.pulses.truncation;
  t.drag = config.pulses.drag;
  t.rabi_scale = model.rabi_scale;
  t.tail_us = config.pulses.tail_linewidths / model.kappa();
  if (config.pulses.f0g1_amplitude) {
    t.f0g1_amplitude = *config.pulses.f0g1_amplitude;
    if (calibration_residual) *calibration_residual = f0g1_residual(model, f0g1_pulse(t.f0g1_us, t.f0g1_amplitude, 0.0, t.truncation));
  } else {
    const F0g1Calibration cal = calibrate_f0g1_amplitude(model, t.f0g1_us, t.truncation);
    t.f0g1_amplitude = cal.amplitude;
    if (calibration_residual) *calibration_residual = cal.residual;
  }
  return t;
}

EvolveOptions evolve_options(const RunConfig& config) {
  EvolveOptions o;
  o.max_step = config.evolve.max_step_us;
  o.tolerance = config.evolve.tolerance;
  return o;
}

}  // namespace qlight::app
