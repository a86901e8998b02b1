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

#include "qlight/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/tools/minima.hpp>

namespace qlight {

void EmitterModel::validate() const {
  if (resonator_dim < 2) throw DomainError("resonator dimension must be at least 2");
  if (!(kappa_c >= 0.0) || !(kappa_i >= 0.0)) throw DomainError("loss rates must be non-negative");
  if (!(f0g1_scale > 0.0) || !(rabi_scale > 0.0)) throw DomainError("coupling scales must be positive");
  if (!(capture_rate_cap > 0.0)) throw DomainError("capture rate cap must be positive");
  for (const TransitionRates* r : {&transmon.ge, &transmon.ef}) {
    if (!(r->relax >= 0.0) || !(r->pure_dephase >= 0.0)) throw DomainError("transmon rates must be non-negative");
  }
}

Space EmitterModel::emitter_space() const {
  return Space({ModeLabel(kTransmonMode, 3), ModeLabel(kResonatorMode, resonator_dim)});
}

EmitterModel EmitterModel::from_device(const DeviceModel& device, double bias_volts, bool decoherence) {
  const double f = resonance_frequency(device.resonator, device.resonator.flux_at(bias_volts));
  const LossRates rates = loss_rates(device.loss, f);
  EmitterModel m;
  m.kappa_c = rates.kappa_c;
  m.kappa_i = rates.kappa_i;
  if (decoherence) m.transmon = decoherence_rates(device.transmon);
  return m;
}

DephasingCoefficients dephasing_coefficients(const DecoherenceRates& rates) {
  // Coherence decay: ge gets c_ge + c_ef/4, ef gets c_ge/4 + c_ef.
  const double gge = rates.ge.pure_dephase;
  const double gef = rates.ef.pure_dephase;
  DephasingCoefficients c;
  c.ge = (gge - gef / 4.0) / (15.0 / 16.0);
  c.ef = gef - c.ge / 4.0;
  if (c.ge < 0.0) {
    c.ge = 0.0;
    c.ef = gef;
  } else if (c.ef < 0.0) {
    c.ef = 0.0;
    c.ge = gge;
  }
  return c;
}

namespace {

// No-jump amplitudes (c_f0, c_g1) under H = g (|g1><f0| + h.c.) - i kappa/2 |g1><g1|.
struct TwoLevel {
  Complex cf{1.0, 0.0};
  Complex cg{0.0, 0.0};
};

TwoLevel two_level_rhs(const TwoLevel& s, double g, double kappa) {
  return {-kI * g * s.cg, -kI * g * s.cf - 0.5 * kappa * s.cg};
}

TwoLevel two_level_step(const TwoLevel& s, double g0, double gm, double g1, double kappa, double h) {
  auto add = [](const TwoLevel& a, const TwoLevel& b, double f) { return TwoLevel{a.cf + f * b.cf, a.cg + f * b.cg}; };
  const TwoLevel k1 = two_level_rhs(s, g0, kappa);
  const TwoLevel k2 = two_level_rhs(add(s, k1, 0.5 * h), gm, kappa);
  const TwoLevel k3 = two_level_rhs(add(s, k2, 0.5 * h), gm, kappa);
  const TwoLevel k4 = two_level_rhs(add(s, k3, h), g1, kappa);
  return {s.cf + h / 6.0 * (k1.cf + 2.0 * k2.cf + 2.0 * k3.cf + k4.cf),
          s.cg + h / 6.0 * (k1.cg + 2.0 * k2.cg + 2.0 * k3.cg + k4.cg)};
}

// Real coupling of the phase-free envelope, evaluated inside [0, duration].
double real_coupling(const EmitterModel& model, const Envelope& e, double t) {
  return model.f0g1_scale * e.amplitude * e.shape(std::clamp(t, 0.0, e.duration));
}

}  // namespace

double f0g1_residual(const EmitterModel& model, const Envelope& f0g1) {
  f0g1.validate();
  constexpr int kSteps = 4000;
  const double h = f0g1.duration / kSteps;
  const double kappa = model.kappa();
  TwoLevel s;
  for (int k = 0; k < kSteps; ++k) {
    const double t = k * h;
    s = two_level_step(s, real_coupling(model, f0g1, t), real_coupling(model, f0g1, t + 0.5 * h),
                       real_coupling(model, f0g1, t + h), kappa, h);
  }
  return std::norm(s.cf);
}

EmissionMode emission_mode(const EmitterModel& model, const Envelope& f0g1, double window, double dt) {
  model.validate();
  f0g1.validate();
  if (!(model.kappa_c > 0.0)) throw DomainError("emission requires kappa_c > 0");
  if (!(dt > 0.0) || !(window >= f0g1.duration)) throw DomainError("window must cover the pulse");
  // Grid aligned with the pulse end, where the truncated envelope is discontinuous.
  const auto n_pulse = static_cast<std::size_t>(std::ceil(f0g1.duration / dt));
  const double h = f0g1.duration / static_cast<double>(n_pulse);
  const auto n = static_cast<std::size_t>(std::ceil(window / h - 1e-9));
  const double kappa = model.kappa();
  const double root_kc = std::sqrt(model.kappa_c);

  EmissionMode out;
  out.dt = h;
  out.amplitude.resize(n + 1);
  TwoLevel s;
  out.amplitude[0] = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * h;
    double g0 = 0.0, gm = 0.0, g1 = 0.0;
    if (k < n_pulse) {
      g0 = real_coupling(model, f0g1, t);
      gm = real_coupling(model, f0g1, t + 0.5 * h);
      g1 = real_coupling(model, f0g1, t + h);
    }
    s = two_level_step(s, g0, gm, g1, kappa, h);
    if (k + 1 == n_pulse) out.residual = std::norm(s.cf);
    out.amplitude[k + 1] = root_kc * s.cg;
  }
  double norm = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    norm += 0.5 * h * (std::norm(out.amplitude[k]) + std::norm(out.amplitude[k + 1]));
  }
  if (!(norm > 0.0)) throw NumericalError("f0g1 pulse emits nothing");
  out.emitted_fraction = norm;
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& v : out.amplitude) v *= scale;
  return out;
}

F0g1Calibration calibrate_f0g1_amplitude(const EmitterModel& model, double duration, double truncation,
                                         double target) {
  model.validate();
  if (!(model.kappa() > 0.0)) throw DomainError("calibration requires a decaying resonator");
  Envelope e = f0g1_pulse(duration, 1.0, 0.0, truncation);
  auto residual = [&](double amp) {
    e.amplitude = amp;
    return f0g1_residual(model, e);
  };
  const double g_step = model.kappa() / 20.0;
  const double g_max = 30.0 * (model.kappa() + kTwoPi / duration);
  const double step = g_step / model.f0g1_scale;
  const auto n = static_cast<int>(std::ceil(g_max / g_step));

  F0g1Calibration best;
  double prev2 = residual(step);
  double prev1 = residual(2.0 * step);
  for (int k = 3; k <= n; ++k) {
    const double cur = residual(k * step);
    if (prev1 < prev2 && prev1 <= cur) {
      const auto [amp, res] = boost::math::tools::brent_find_minima(residual, (k - 2) * step, k * step, 50);
      if (res < best.residual) best = {amp, res};
      if (res < target) return best;
    }
    prev2 = prev1;
    prev1 = cur;
  }
  return best;
}

Complex CaptureBin::coupling_at(double t) const {
  if (t < t_start || t > t_end || coupling.empty()) return 0.0;
  const double x = (t - t_start) / grid_dt;
  const auto k = static_cast<std::size_t>(x);
  if (k + 1 >= coupling.size()) return coupling.back();
  const double f = x - static_cast<double>(k);
  return (1.0 - f) * coupling[k] + f * coupling[k + 1];
}

CaptureBin make_capture_bin(ModeLabel label, double t_start, double t_end, const EmissionMode& mode,
                            double rate_cap) {
  if (!(t_end > t_start) || t_start < 0.0) throw DomainError("capture window must satisfy 0 <= start < end");
  if (!(rate_cap > 0.0)) throw DomainError("capture rate cap must be positive");
  if (!(mode.dt > 0.0) || mode.amplitude.empty()) throw DomainError("empty emission mode");
  CaptureBin bin;
  bin.label = std::move(label);
  bin.t_start = t_start;
  bin.t_end = t_end;
  bin.grid_dt = mode.dt;
  const auto n = static_cast<std::size_t>(std::ceil((t_end - t_start) / mode.dt)) + 1;
  bin.coupling.resize(n);
  const double g_cap = std::sqrt(rate_cap);
  double cumulative = 0.0;
  Complex prev = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Complex v = k < mode.amplitude.size() ? mode.amplitude[k] : Complex(0.0);
    if (k > 0) cumulative += 0.5 * mode.dt * (std::norm(prev) + std::norm(v));
    prev = v;
    Complex g = 0.0;
    if (cumulative > 0.0) g = -std::conj(v) / std::sqrt(cumulative);
    if (std::abs(g) > g_cap) g *= g_cap / std::abs(g);
    bin.coupling[k] = g;
  }
  return bin;
}

namespace {

SparseMatrix sparse(const Operator& op) { return op.matrix().sparseView(); }

SparseMatrix sparse(const Space& space, std::string_view mode, const Matrix& local) {
  return sparse(Operator::embed(space, mode, local));
}

Matrix transition(int to, int from) {
  Matrix m = Matrix::Zero(3, 3);
  m(to, from) = 1.0;
  return m;
}

// Tr(S rho) for sparse S.
Complex trace_product(const SparseMatrix& s, const Matrix& rho) {
  Complex acc = 0.0;
  for (int i = 0; i < s.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(s, i); it; ++it) acc += it.value() * rho(it.col(), i);
  }
  return acc;
}

struct Drive {
  SparseMatrix up;
  SparseMatrix down;
  const Segment* segment = nullptr;
  double scale = 0.0;

  Complex coefficient(double t) const {
    const double local = std::clamp(t - segment->start, 0.0, segment->envelope.duration);
    return scale * segment->envelope.value(local);
  }
};

struct BinOps {
  SparseMatrix b;
  SparseMatrix bdag_a;  // b^dag a
  SparseMatrix n;
};

// Per-basis-state diagonal observables.
struct Diagonals {
  std::vector<int> level;
  std::vector<int> n_r;
  std::vector<std::vector<int>> n_bin;
};

class Integrator {
 public:
  Integrator(const PulseSequence& seq, const EmitterModel& model, std::span<const CaptureBin> bins,
             const Space& space)
      : model_(model), bins_(bins), root_kc_(std::sqrt(model.kappa_c)) {
    const int d = space.dimension();
    const Matrix a_local = destroy_matrix(model.resonator_dim);
    a_ = sparse(space, kResonatorMode, a_local);
    const SparseMatrix n_r = sparse(space, kResonatorMode, a_local.adjoint() * a_local);

    std::vector<SparseMatrix> constant_jumps;
    auto add_jump = [&](double rate, const SparseMatrix& op) {
      if (rate > 0.0) constant_jumps.push_back(std::sqrt(rate) * op);
    };
    add_jump(model.kappa_i, a_);
    add_jump(model.transmon.ge.relax, sparse(space, kTransmonMode, transition(0, 1)));
    add_jump(model.transmon.ef.relax, sparse(space, kTransmonMode, transition(1, 2)));
    const DephasingCoefficients deph = dephasing_coefficients(model.transmon);
    Matrix dge = Matrix::Zero(3, 3), def = Matrix::Zero(3, 3);
    dge.diagonal() << -1.0, 1.0, 0.0;
    def.diagonal() << 0.0, -1.0, 1.0;
    add_jump(0.5 * deph.ge, sparse(space, kTransmonMode, dge));
    add_jump(0.5 * deph.ef, sparse(space, kTransmonMode, def));
    jumps_ = std::move(constant_jumps);

    SparseMatrix k0 = model.kappa_c * n_r;
    for (const auto& l : jumps_) {
      const SparseMatrix ll = SparseMatrix(l.adjoint()) * l;
      k0 += ll;
    }
    k0_ = Complex(0.0, -0.5) * k0;
    k0_.makeCompressed();

    const SparseMatrix ge_up = sparse(space, kTransmonMode, transition(1, 0));
    const SparseMatrix ef_up = sparse(space, kTransmonMode, transition(2, 1));
    const SparseMatrix f0g1_up = sparse(space, kTransmonMode, transition(0, 2)) * SparseMatrix(a_.adjoint());
    for (const auto& seg : seq.segments()) {
      Drive drv;
      drv.segment = &seg;
      switch (seg.channel) {
        case Channel::ge:
          drv.up = ge_up;
          drv.scale = 0.5 * model.rabi_scale;
          break;
        case Channel::ef:
          drv.up = ef_up;
          drv.scale = 0.5 * model.rabi_scale;
          break;
        case Channel::f0g1:
          drv.up = f0g1_up;
          drv.scale = model.f0g1_scale;
          break;
      }
      drv.down = drv.up.adjoint();
      drives_.push_back(std::move(drv));
    }

    for (const auto& bin : bins) {
      BinOps ops;
      const Matrix b_local = destroy_matrix(bin.label.dim);
      ops.b = sparse(space, bin.label.name, b_local);
      ops.bdag_a = SparseMatrix(ops.b.adjoint()) * a_;
      ops.n = SparseMatrix(ops.b.adjoint()) * ops.b;
      bin_ops_.push_back(std::move(ops));
    }

    const std::size_t ir = space.index_of(kResonatorMode);
    diag_.level.resize(d);
    diag_.n_r.resize(d);
    diag_.n_bin.assign(bins.size(), std::vector<int>(d));
    for (int i = 0; i < d; ++i) {
      const auto occ = space.occupations(i);
      diag_.level[i] = occ[0];
      diag_.n_r[i] = occ[ir];
      for (std::size_t k = 0; k < bins.size(); ++k) diag_.n_bin[k][i] = occ[2 + k];
    }
  }

  // Selects the drives and bin active over [a, b].
  void enter_piece(double a, double b) {
    const double mid = 0.5 * (a + b);
    active_.clear();
    for (const auto& d : drives_) {
      if (d.segment->start <= mid && mid <= d.segment->end()) active_.push_back(&d);
    }
    bin_ = -1;
    for (std::size_t k = 0; k < bins_.size(); ++k) {
      if (bins_[k].t_start <= mid && mid <= bins_[k].t_end) bin_ = static_cast<int>(k);
    }
  }

  int active_bin() const { return bin_; }

  Complex bin_coupling(double t) const { return bin_ < 0 ? Complex(0.0) : bins_[bin_].coupling_at(t); }

  Matrix rhs(double t, const Matrix& rho) const {
    Matrix x = k0_ * rho;
    for (const Drive* d : active_) {
      const Complex c = d->coefficient(t);
      x.noalias() += c * (d->up * rho);
      x.noalias() += std::conj(c) * (d->down * rho);
    }
    const Complex g = bin_coupling(t);
    if (bin_ >= 0) {
      const BinOps& ops = bin_ops_[bin_];
      x.noalias() += (-kI * root_kc_ * std::conj(g)) * (ops.bdag_a * rho);
      x.noalias() += Complex(0.0, -0.5 * std::norm(g)) * (ops.n * rho);
    }
    Matrix out = -kI * (x - x.adjoint());
    for (const auto& l : jumps_) {
      const Matrix y = (l * rho).adjoint();
      out.noalias() += l * y;
    }
    if (root_kc_ > 0.0) {
      Matrix y = root_kc_ * (a_ * rho);
      if (bin_ >= 0) y.noalias() += g * (bin_ops_[bin_].b * rho);
      const Matrix yd = y.adjoint();
      out.noalias() += root_kc_ * (a_ * yd);
      if (bin_ >= 0) out.noalias() += g * (bin_ops_[bin_].b * yd);
    }
    return out;
  }

  Matrix rk4(double t, const Matrix& rho, double h) const {
    const Matrix k1 = rhs(t, rho);
    const Matrix k2 = rhs(t + 0.5 * h, rho + (0.5 * h) * k1);
    const Matrix k3 = rhs(t + 0.5 * h, rho + (0.5 * h) * k2);
    const Matrix k4 = rhs(t + h, rho + h * k3);
    return rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  double diag_sum(const Matrix& rho, const std::vector<int>& w) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * rho(i, i).real();
    return acc;
  }

  double population(const Matrix& rho, int level) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < diag_.level.size(); ++i) {
      if (diag_.level[i] == level) acc += rho(i, i).real();
    }
    return acc;
  }

  double n_resonator(const Matrix& rho) const { return diag_sum(rho, diag_.n_r); }
  double n_bin(const Matrix& rho, std::size_t k) const { return diag_sum(rho, diag_.n_bin[k]); }

  double excitation(const Matrix& rho) const {
    double acc = population(rho, 1) + population(rho, 2) + n_resonator(rho);
    for (std::size_t k = 0; k < bins_.size(); ++k) acc += n_bin(rho, k);
    return acc;
  }

  struct Rates {
    double internal = 0.0;
    double output = 0.0;
    double decay = 0.0;
  };

  Rates rates(double t, const Matrix& rho) const {
    Rates r;
    const double nr = n_resonator(rho);
    r.internal = model_.kappa_i * nr;
    r.decay = model_.transmon.ge.relax * population(rho, 1);
    r.output = model_.kappa_c * nr;
    if (bin_ >= 0) {
      const Complex g = bin_coupling(t);
      r.output += std::norm(g) * n_bin(rho, bin_);
      r.output += 2.0 * root_kc_ * (std::conj(g) * trace_product(bin_ops_[bin_].bdag_a, rho)).real();
    }
    return r;
  }

  TrajectoryPoint sample(double t, const Matrix& rho) const {
    TrajectoryPoint p;
    p.t = t;
    p.p_g = population(rho, 0);
    p.p_e = population(rho, 1);
    p.p_f = population(rho, 2);
    p.n_resonator = n_resonator(rho);
    for (std::size_t k = 0; k < bins_.size(); ++k) p.n_bins.push_back(n_bin(rho, k));
    return p;
  }

 private:
  const EmitterModel& model_;
  std::span<const CaptureBin> bins_;
  double root_kc_;
  SparseMatrix a_;
  SparseMatrix k0_;
  std::vector<SparseMatrix> jumps_;
  std::vector<Drive> drives_;
  std::vector<BinOps> bin_ops_;
  Diagonals diag_;
  std::vector<const Drive*> active_;
  int bin_ = -1;
};

double peak_rate(const PulseSequence& seq, const EmitterModel& model) {
  double rate = model.kappa();
  for (const auto& seg : seq.segments()) {
    const double scale = seg.channel == Channel::f0g1 ? model.f0g1_scale : 0.5 * model.rabi_scale;
    const double peak = std::abs(seg.envelope.amplitude) * (1.0 + std::abs(seg.envelope.drag) / seg.envelope.duration);
    rate = std::max(rate, scale * peak);
  }
  return rate;
}

}  // namespace

SimulationResult evolve(const DensityMatrix& rho0, const PulseSequence& sequence, const EmitterModel& model,
                        std::span<const CaptureBin> bins, const EvolveOptions& options) {
  model.validate();
  if (!(rho0.space() == model.emitter_space())) {
    throw DomainError("initial state must live on the emitter space (q: 3, r: resonator_dim)");
  }
  if (!(options.max_step > 0.0) || !(options.min_step > 0.0) || !(options.tolerance > 0.0)) {
    throw DomainError("step sizes and tolerance must be positive");
  }
  if (options.max_step * peak_rate(sequence, model) >= 0.05) {
    throw DomainError("max_step does not resolve the fastest rate (dt * rate must be < 0.05)");
  }

  std::vector<ModeLabel> labels = model.emitter_space().modes();
  std::vector<std::pair<double, double>> windows;
  for (const auto& bin : bins) {
    if (!(bin.t_end > bin.t_start) || bin.coupling.empty() || !(bin.grid_dt > 0.0)) {
      throw DomainError("capture bin '" + bin.label.name + "' is malformed");
    }
    labels.push_back(bin.label);
    windows.emplace_back(bin.t_start, bin.t_end);
  }
  std::sort(windows.begin(), windows.end());
  for (std::size_t k = 1; k < windows.size(); ++k) {
    if (windows[k].first < windows[k - 1].second - 1e-12) throw DomainError("capture windows overlap");
  }
  const Space space(labels);

  Matrix bins_vacuum = Matrix::Zero(1, 1);
  bins_vacuum(0, 0) = 1.0;
  for (const auto& bin : bins) {
    Matrix v = Matrix::Zero(bin.label.dim, bin.label.dim);
    v(0, 0) = 1.0;
    bins_vacuum = kron(bins_vacuum, v);
  }
  Matrix rho = kron(rho0.matrix(), bins_vacuum);

  Integrator integ(sequence, model, bins, space);

  std::vector<double> breaks{0.0};
  for (const auto& seg : sequence.segments()) {
    breaks.push_back(seg.start);
    breaks.push_back(seg.end());
  }
  for (const auto& bin : bins) {
    breaks.push_back(bin.t_start);
    breaks.push_back(bin.t_end);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(), [](double x, double y) { return y - x < 1e-12; }),
               breaks.end());

  SimulationResult result;
  result.initial_excitation = integ.excitation(rho);
  result.trajectory.push_back(integ.sample(0.0, rho));
  double next_record = options.record_interval;
  double h_try = options.max_step;

  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p];
    const double b = breaks[p + 1];
    integ.enter_piece(a, b);
    double t = a;
    while (b - t > 1e-13) {
      const double h = std::min(h_try, b - t);
      const Matrix full = integ.rk4(t, rho, h);
      const Matrix half = integ.rk4(t, rho, 0.5 * h);
      const Matrix two = integ.rk4(t + 0.5 * h, half, 0.5 * h);
      const double err = (two - full).cwiseAbs().maxCoeff();
      if (!(err <= options.tolerance)) {
        ++result.rejected_steps;
        h_try = 0.5 * h;
        if (h_try < options.min_step) {
          throw NumericalError("integration step fell below min_step at t = " + std::to_string(t) + " us");
        }
        continue;
      }
      // Richardson extrapolation of the two RK4 estimates.
      Matrix next = two + (two - full) / 15.0;
      const auto r0 = integ.rates(t, rho);
      const auto rm = integ.rates(t + 0.5 * h, half);
      const auto r1 = integ.rates(t + h, next);
      result.internal_loss += h / 6.0 * (r0.internal + 4.0 * rm.internal + r1.internal);
      result.output_loss += h / 6.0 * (r0.output + 4.0 * rm.output + r1.output);
      result.transmon_decay += h / 6.0 * (r0.decay + 4.0 * rm.decay + r1.decay);
      rho = std::move(next);
      t += h;
      ++result.accepted_steps;
      if (integ.active_bin() < 0 && integ.n_resonator(rho) > options.uncovered_threshold) {
        result.uncovered_emission = true;
      }
      if (t >= next_record - 1e-12) {
        result.trajectory.push_back(integ.sample(t, rho));
        while (next_record <= t + 1e-12) next_record += options.record_interval;
      }
      if (h == h_try && err < options.tolerance / 64.0) h_try = std::min(2.0 * h_try, options.max_step);
    }
  }
  const double t_final = breaks.back();
  if (result.trajectory.back().t < t_final - 1e-12) result.trajectory.push_back(integ.sample(t_final, rho));

  rho = 0.5 * (rho + rho.adjoint()).eval();
  result.final_excitation = integ.excitation(rho);
  for (std::size_t k = 0; k < bins.size(); ++k) result.captured.push_back(integ.n_bin(rho, k));
  result.resonator_residual = integ.n_resonator(rho);

  std::vector<std::string> keep{kTransmonMode};
  for (const auto& bin : bins) keep.push_back(bin.label.name);
  result.state = partial_trace(DensityMatrix(space, rho), keep);
  return result;
}

}  // namespace qlight
