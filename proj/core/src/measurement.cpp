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

#include "qlight/measurement.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <random>

#include <nlohmann/json.hpp>

#include "qlight/container.hpp"
#include "qlight/parallel.hpp"

namespace qlight {

void NoiseModel::validate() const {
  if (!(added_quanta >= 0.0) || !std::isfinite(added_quanta)) throw DomainError("added noise quanta must be >= 0");
  if (!(detection_efficiency > 0.0 && detection_efficiency <= 1.0)) {
    throw DomainError("detection efficiency must lie in (0, 1]");
  }
  if (!(split > 0.0 && split <= 1.0)) throw DomainError("split factor must lie in (0, 1]");
}

std::size_t QuadratureRecord::mode_index(const std::string& name) const {
  const auto it = std::find(modes.begin(), modes.end(), name);
  if (it == modes.end()) throw DomainError("record has no mode '" + name + "'");
  return static_cast<std::size_t>(it - modes.begin());
}

void QuadratureRecord::validate() const {
  const auto m = static_cast<Eigen::Index>(modes.size());
  if (signal.cols() != m || reference.cols() != m) throw DomainError("record columns disagree with mode labels");
  if (signal.rows() != reference.rows()) throw DomainError("signal and reference shot counts differ");
  if (ancilla_basis.size() != ancilla_outcome.size()) throw DomainError("ancilla arrays disagree");
  if (has_ancilla() && ancilla_outcome.size() != shots()) throw DomainError("ancilla outcomes must cover every shot");
}

namespace {

using Rng = std::mt19937_64;

// Pure-state Husimi sampler over a product of truncated modes, by rejection
// against a circular Gaussian proposal with E|z|^2 = kSpread per mode.
class HusimiSampler {
 public:
  static constexpr double kSpread = 2.0;

  HusimiSampler(const Space& space, const Matrix& rho) : space_(space) {
    const int d = space.dimension();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (rho + rho.adjoint()));
    if (eig.info() != Eigen::Success) throw NumericalError("state diagonalization failed");
    double total = 0.0;
    for (int k = 0; k < d; ++k) {
      const double w = eig.eigenvalues()(k);
      if (w <= 1e-14) continue;
      weights_.push_back(w);
      vectors_.push_back(eig.eigenvectors().col(k));
      total += w;
    }
    if (!(total > 0.0)) throw NumericalError("state has no positive weight");
    double acc = 0.0;
    for (auto& w : weights_) {
      acc += w / total;
      w = acc;
    }
    weights_.back() = 1.0;

    occupations_.resize(d);
    for (int i = 0; i < d; ++i) occupations_[i] = space.occupations(i);
    bound_ = 1.0;
    for (const auto& m : space.modes()) {
      bound_ *= mode_bound(m.dim);
      max_dim_ = std::max(max_dim_, m.dim);
    }
    inv_sqrt_factorial_.resize(max_dim_);
    double f = 1.0;
    for (int n = 0; n < max_dim_; ++n) {
      if (n > 0) f *= n;
      inv_sqrt_factorial_[n] = 1.0 / std::sqrt(f);
    }
  }

  // Writes one draw (one complex value per mode) into `out`.
  void draw(Rng& rng, Complex* out) const {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double u = uni(rng);
    const std::size_t j = static_cast<std::size_t>(
        std::lower_bound(weights_.begin(), weights_.end(), u) - weights_.begin());
    const Vector& psi = vectors_[std::min(j, vectors_.size() - 1)];
    std::normal_distribution<double> gauss(0.0, std::sqrt(kSpread / 2.0));
    const std::size_t m = space_.num_modes();
    std::vector<Complex> powers(m * static_cast<std::size_t>(max_dim_));
    for (;;) {
      double envelope = 1.0;
      for (std::size_t k = 0; k < m; ++k) {
        out[k] = Complex(gauss(rng), gauss(rng));
        envelope *= kSpread * std::exp(-(1.0 - 1.0 / kSpread) * std::norm(out[k]));
        Complex p = 1.0;
        for (int n = 0; n < space_.mode(k).dim; ++n) {
          powers[k * max_dim_ + n] = p * inv_sqrt_factorial_[n];
          p *= std::conj(out[k]);
        }
      }
      Complex overlap = 0.0;
      for (std::size_t i = 0; i < occupations_.size(); ++i) {
        Complex term = psi(static_cast<Eigen::Index>(i));
        if (term == 0.0) continue;
        for (std::size_t k = 0; k < m; ++k) term *= powers[k * max_dim_ + occupations_[i][k]];
        overlap += term;
      }
      if (uni(rng) * bound_ <= envelope * std::norm(overlap)) return;
    }
  }

 private:
  // max_x s exp(-(1 - 1/s) x) sum_{n<d} x^n/n!, which bounds the acceptance
  // ratio of one mode by Cauchy-Schwarz.
  static double mode_bound(int dim) {
    auto f = [dim](double x) {
      double term = 1.0, sum = 0.0;
      for (int n = 0; n < dim; ++n) {
        sum += term;
        term *= x / (n + 1);
      }
      return kSpread * std::exp(-(1.0 - 1.0 / kSpread) * x) * sum;
    };
    const double x_max = 4.0 * dim + 20.0;
    double best = f(0.0), best_x = 0.0;
    for (double x = 0.0; x <= x_max; x += 1e-3) {
      const double v = f(x);
      if (v > best) {
        best = v;
        best_x = x;
      }
    }
    for (double x = std::max(0.0, best_x - 1e-3); x <= best_x + 1e-3; x += 1e-6) best = std::max(best, f(x));
    return best * (1.0 + 1e-6);
  }

  Space space_;
  std::vector<double> weights_;
  std::vector<Vector> vectors_;
  std::vector<std::vector<int>> occupations_;
  std::vector<double> inv_sqrt_factorial_;
  double bound_ = 1.0;
  int max_dim_ = 1;
};

DensityMatrix lossy(const DensityMatrix& rho, double eta, const std::string& skip = {}) {
  if (eta >= 1.0) return rho;
  DensityMatrix out = rho;
  for (const auto& m : rho.space().modes()) {
    if (m.name != skip) out = apply_loss(out, m.name, eta);
  }
  return out;
}

void add_noise(Rng& rng, double nbar, Complex* row, std::size_t m) {
  if (nbar <= 0.0) return;
  std::normal_distribution<double> gauss(0.0, std::sqrt(nbar / 2.0));
  for (std::size_t k = 0; k < m; ++k) row[k] += Complex(gauss(rng), gauss(rng));
}

// Vacuum Husimi plus noise: a circular Gaussian with E|S|^2 = 1 + nbar.
void draw_reference(Rng& rng, double nbar, Complex* row, std::size_t m) {
  std::normal_distribution<double> gauss(0.0, std::sqrt((1.0 + nbar) / 2.0));
  for (std::size_t k = 0; k < m; ++k) row[k] = Complex(gauss(rng), gauss(rng));
}

std::size_t chunk_count(std::size_t shots, std::size_t chunk) { return (shots + chunk - 1) / chunk; }

void check_sampling(std::size_t shots, const SamplingOptions& options) {
  if (shots == 0) throw DomainError("shots must be >= 1");
  if (options.chunk == 0) throw DomainError("chunk size must be >= 1");
}

// Row-major scratch copied into the column-major record.
void store_row(Matrix& dest, std::size_t shot, const std::vector<Complex>& row) {
  for (std::size_t k = 0; k < row.size(); ++k) dest(static_cast<Eigen::Index>(shot), static_cast<Eigen::Index>(k)) = row[k];
}

}  // namespace

Matrix sample_husimi(const DensityMatrix& rho, std::size_t draws, std::uint64_t seed) {
  const HusimiSampler sampler(rho.space(), rho.matrix());
  const std::size_t m = rho.space().num_modes();
  Matrix out(static_cast<Eigen::Index>(draws), static_cast<Eigen::Index>(m));
  Rng rng(seed);
  std::vector<Complex> row(m);
  for (std::size_t s = 0; s < draws; ++s) {
    sampler.draw(rng, row.data());
    store_row(out, s, row);
  }
  return out;
}

QuadratureRecord sample_heterodyne(const DensityMatrix& rho, const NoiseModel& noise, std::size_t shots,
                                   std::uint64_t seed, const SamplingOptions& options) {
  noise.validate();
  check_sampling(shots, options);
  const DensityMatrix detected = lossy(rho, noise.transmissivity());
  const HusimiSampler sampler(detected.space(), detected.matrix());
  const std::size_t m = rho.space().num_modes();

  QuadratureRecord rec;
  for (const auto& mode : rho.space().modes()) rec.modes.push_back(mode.name);
  rec.added_quanta = noise.added_quanta;
  rec.signal.resize(static_cast<Eigen::Index>(shots), static_cast<Eigen::Index>(m));
  rec.reference.resize(static_cast<Eigen::Index>(shots), static_cast<Eigen::Index>(m));

  parallel_for(
      chunk_count(shots, options.chunk),
      [&](std::size_t c) {
        Rng sig_rng(derive_seed(seed, 2 * c));
        Rng ref_rng(derive_seed(seed, 2 * c + 1));
        std::vector<Complex> row(m);
        const std::size_t end = std::min(shots, (c + 1) * options.chunk);
        for (std::size_t s = c * options.chunk; s < end; ++s) {
          sampler.draw(sig_rng, row.data());
          add_noise(sig_rng, noise.added_quanta, row.data(), m);
          store_row(rec.signal, s, row);
          draw_reference(ref_rng, noise.added_quanta, row.data(), m);
          store_row(rec.reference, s, row);
        }
      },
      options.workers);
  return rec;
}

QuadratureRecord sample_heterodyne_with_ancilla(const DensityMatrix& rho, const std::string& ancilla,
                                                const NoiseModel& noise, std::size_t shots, std::uint64_t seed,
                                                const SamplingOptions& options) {
  noise.validate();
  check_sampling(shots, options);
  const Space& space = rho.space();
  const std::size_t iq = space.index_of(ancilla);
  const int dq = space.mode(iq).dim;
  if (dq < 2 || dq > 3) throw DomainError("ancilla must have dimension 2 or 3");
  if (space.num_modes() < 2) throw DomainError("ancilla sampling needs at least one field mode");

  std::vector<ModeLabel> field_modes;
  for (std::size_t k = 0; k < space.num_modes(); ++k) {
    if (k != iq) field_modes.push_back(space.mode(k));
  }
  const Space field(field_modes);
  const DensityMatrix detected = lossy(rho, noise.transmissivity(), ancilla);
  const Matrix& r = detected.matrix();
  const int d = space.dimension();
  std::vector<int> level(d), field_index(d);
  for (int i = 0; i < d; ++i) {
    auto occ = space.occupations(i);
    level[i] = occ[iq];
    occ.erase(occ.begin() + static_cast<std::ptrdiff_t>(iq));
    field_index[i] = field.index(occ);
  }

  // Outcome order per basis: +1, -1, leak.
  const double h = 1.0 / std::sqrt(2.0);
  const std::array<std::array<std::array<Complex, 3>, 3>, 3> projector_states{{
      {{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}},
      {{{h, h, 0.0}, {h, -h, 0.0}, {0.0, 0.0, 1.0}}},
      {{{h, Complex(0.0, h), 0.0}, {h, Complex(0.0, -h), 0.0}, {0.0, 0.0, 1.0}}},
  }};
  struct Branch {
    double probability = 0.0;
    std::unique_ptr<HusimiSampler> sampler;
  };
  std::array<std::array<Branch, 3>, 3> branches;
  for (int b = 0; b < 3; ++b) {
    for (int o = 0; o < 3; ++o) {
      if (o == 2 && dq == 2) continue;
      const auto& phi = projector_states[b][o];
      Matrix cond = Matrix::Zero(field.dimension(), field.dimension());
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          cond(field_index[i], field_index[j]) += std::conj(phi[level[i]]) * phi[level[j]] * r(i, j);
        }
      }
      const double p = cond.trace().real();
      branches[b][o].probability = std::max(0.0, p);
      if (p > 1e-15) branches[b][o].sampler = std::make_unique<HusimiSampler>(field, cond / p);
    }
  }

  const std::size_t m = field_modes.size();
  QuadratureRecord rec;
  for (const auto& mode : field_modes) rec.modes.push_back(mode.name);
  rec.added_quanta = noise.added_quanta;
  rec.signal.resize(static_cast<Eigen::Index>(shots), static_cast<Eigen::Index>(m));
  rec.reference.resize(static_cast<Eigen::Index>(shots), static_cast<Eigen::Index>(m));
  rec.ancilla_basis.resize(shots);
  rec.ancilla_outcome.resize(shots);
  constexpr std::array<std::int8_t, 3> kOutcome{1, -1, 0};

  parallel_for(
      chunk_count(shots, options.chunk),
      [&](std::size_t c) {
        Rng sig_rng(derive_seed(seed, 2 * c));
        Rng ref_rng(derive_seed(seed, 2 * c + 1));
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        std::vector<Complex> row(m);
        const std::size_t end = std::min(shots, (c + 1) * options.chunk);
        for (std::size_t s = c * options.chunk; s < end; ++s) {
          const int b = static_cast<int>(s % 3);
          const auto& br = branches[b];
          const double total = br[0].probability + br[1].probability + br[2].probability;
          const double u = uni(sig_rng) * total;
          int o = u < br[0].probability ? 0 : (u < br[0].probability + br[1].probability ? 1 : 2);
          // Branches below the support threshold fall back to a supported one.
          for (int k = 0; k < 3 && !br[o].sampler; ++k) o = (o + 1) % 3;
          if (!br[o].sampler) throw NumericalError("ancilla basis without support");
          br[o].sampler->draw(sig_rng, row.data());
          add_noise(sig_rng, noise.added_quanta, row.data(), m);
          store_row(rec.signal, s, row);
          rec.ancilla_basis[s] = static_cast<AncillaBasis>(b);
          rec.ancilla_outcome[s] = kOutcome[o];
          draw_reference(ref_rng, noise.added_quanta, row.data(), m);
          store_row(rec.reference, s, row);
        }
      },
      options.workers);
  return rec;
}

RealMatrix histogram2d(const QuadratureRecord& rec, const std::string& mode, const HistogramRange& range,
                       bool reference) {
  rec.validate();
  if (rec.shots() == 0) throw DomainError("empty record");
  if (range.bins < 1 || !(range.extent > 0.0)) throw DomainError("histogram needs bins >= 1 and extent > 0");
  const auto k = static_cast<Eigen::Index>(rec.mode_index(mode));
  const Matrix& data = reference ? rec.reference : rec.signal;
  RealMatrix h = RealMatrix::Zero(range.bins, range.bins);
  const double scale = range.bins / (2.0 * range.extent);
  double in_range = 0.0;
  for (Eigen::Index s = 0; s < data.rows(); ++s) {
    const Complex z = data(s, k);
    const double x = std::floor((z.real() + range.extent) * scale);
    const double y = std::floor((z.imag() + range.extent) * scale);
    if (x < 0 || y < 0 || x >= range.bins || y >= range.bins) continue;
    h(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) += 1.0;
    in_range += 1.0;
  }
  if (in_range == 0.0) throw DomainError("no outcomes fall inside the histogram range");
  return h / in_range;
}

RealMatrix subtract_reference(const RealMatrix& signal, const RealMatrix& vacuum) {
  if (signal.rows() != vacuum.rows() || signal.cols() != vacuum.cols()) throw DomainError("histogram binning mismatch");
  return signal - vacuum;
}

void write_record(const std::string& path, const QuadratureRecord& rec) {
  rec.validate();
  ColumnTable table;
  const auto n = static_cast<Eigen::Index>(rec.shots());
  auto column = [&](const Matrix& m, Eigen::Index k, bool imag) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (Eigen::Index s = 0; s < n; ++s) v[s] = imag ? m(s, k).imag() : m(s, k).real();
    return v;
  };
  for (std::size_t k = 0; k < rec.modes.size(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    table.add("sig_re_" + rec.modes[k], column(rec.signal, kk, false));
    table.add("sig_im_" + rec.modes[k], column(rec.signal, kk, true));
    table.add("ref_re_" + rec.modes[k], column(rec.reference, kk, false));
    table.add("ref_im_" + rec.modes[k], column(rec.reference, kk, true));
  }
  if (rec.has_ancilla()) {
    std::vector<double> basis(rec.shots()), outcome(rec.shots());
    for (std::size_t s = 0; s < rec.shots(); ++s) {
      basis[s] = static_cast<double>(rec.ancilla_basis[s]);
      outcome[s] = rec.ancilla_outcome[s];
    }
    table.add("ancilla_basis", std::move(basis));
    table.add("ancilla_outcome", std::move(outcome));
  }
  nlohmann::json meta{{"format", "qlight.quadrature_record"},
                      {"modes", rec.modes},
                      {"added_quanta", rec.added_quanta},
                      {"shots", rec.shots()},
                      {"ancilla", rec.has_ancilla()}};
  table.metadata = meta.dump();
  write_columns(path, table);
}

QuadratureRecord read_record(const std::string& path) {
  const ColumnTable table = read_columns(path);
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(table.metadata);
  } catch (const nlohmann::json::exception& e) {
    throw Error("record metadata is not JSON: " + std::string(e.what()));
  }
  if (meta.value("format", "") != "qlight.quadrature_record") throw Error("'" + path + "' is not a quadrature record");
  QuadratureRecord rec;
  rec.modes = meta.at("modes").get<std::vector<std::string>>();
  rec.added_quanta = meta.at("added_quanta").get<double>();
  const auto n = static_cast<Eigen::Index>(table.rows());
  const auto m = static_cast<Eigen::Index>(rec.modes.size());
  rec.signal.resize(n, m);
  rec.reference.resize(n, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto& name = rec.modes[k];
    const auto& sr = table.column("sig_re_" + name);
    const auto& si = table.column("sig_im_" + name);
    const auto& rr = table.column("ref_re_" + name);
    const auto& ri = table.column("ref_im_" + name);
    for (Eigen::Index s = 0; s < n; ++s) {
      rec.signal(s, k) = Complex(sr[s], si[s]);
      rec.reference(s, k) = Complex(rr[s], ri[s]);
    }
  }
  if (meta.value("ancilla", false)) {
    const auto& basis = table.column("ancilla_basis");
    const auto& outcome = table.column("ancilla_outcome");
    for (Eigen::Index s = 0; s < n; ++s) {
      rec.ancilla_basis.push_back(static_cast<AncillaBasis>(static_cast<int>(basis[s])));
      rec.ancilla_outcome.push_back(static_cast<std::int8_t>(outcome[s]));
    }
  }
  rec.validate();
  return rec;
}

void write_record_csv(const std::string& path, const QuadratureRecord& rec) {
  rec.validate();
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "shot,mode,re,im,is_reference\n";
  std::array<char, 32> buf{};
  auto num = [&](double v) {
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string_view(buf.data(), static_cast<std::size_t>(res.ptr - buf.data()));
  };
  for (int ref = 0; ref < 2; ++ref) {
    const Matrix& data = ref ? rec.reference : rec.signal;
    for (Eigen::Index s = 0; s < data.rows(); ++s) {
      for (Eigen::Index k = 0; k < data.cols(); ++k) {
        out << s << ',' << rec.modes[k] << ',' << num(data(s, k).real()) << ',';
        out << num(data(s, k).imag()) << ',' << ref << '\n';
      }
    }
  }
  if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace qlight
