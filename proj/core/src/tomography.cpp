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

#include "qlight/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qlight/parallel.hpp"

namespace qlight {

int total_order(const MomentIndex& idx) {
  int s = 0;
  for (const auto& [n, m] : idx) s += n + m;
  return s;
}

namespace {

// Power vectors v with v_k <= max_power[k] and sum v <= cap (cap < 0: no cap).
std::vector<std::vector<int>> power_vectors(const std::vector<int>& max_power, int cap) {
  std::vector<std::vector<int>> out;
  std::vector<int> v(max_power.size(), 0);
  for (;;) {
    const int s = std::accumulate(v.begin(), v.end(), 0);
    if (cap < 0 || s <= cap) out.push_back(v);
    std::size_t k = 0;
    while (k < v.size() && v[k] == max_power[k]) v[k++] = 0;
    if (k == v.size()) break;
    ++v[k];
  }
  return out;
}

void sort_by_order(std::vector<MomentIndex>& indices) {
  std::stable_sort(indices.begin(), indices.end(),
                   [](const MomentIndex& a, const MomentIndex& b) { return total_order(a) < total_order(b); });
}

bool dominated(const MomentIndex& sub, const MomentIndex& idx) {
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (sub[k].first > idx[k].first || sub[k].second > idx[k].second) return false;
  }
  return true;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::string describe(const MomentIndex& idx) {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < idx.size(); ++k) os << (k ? "," : "") << idx[k].first << ':' << idx[k].second;
  os << ')';
  return os.str();
}

}  // namespace

std::vector<MomentIndex> moment_indices(const std::vector<int>& max_power, int photon_cap) {
  if (max_power.empty()) throw DomainError("moment indices need at least one mode");
  for (int p : max_power) {
    if (p < 0) throw DomainError("maximum powers must be non-negative");
  }
  const auto vecs = power_vectors(max_power, photon_cap);
  std::vector<MomentIndex> out;
  for (const auto& n : vecs) {
    for (const auto& m : vecs) {
      MomentIndex idx(max_power.size());
      for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = {n[k], m[k]};
      out.push_back(std::move(idx));
    }
  }
  sort_by_order(out);
  return out;
}

std::vector<MomentIndex> moment_indices_by_order(std::size_t modes, int max_order) {
  if (modes == 0 || max_order < 0) throw DomainError("need at least one mode and max_order >= 0");
  std::vector<MomentIndex> out;
  for (auto& idx : moment_indices(std::vector<int>(modes, max_order), max_order)) {
    if (total_order(idx) <= max_order) out.push_back(std::move(idx));
  }
  return out;
}

std::size_t MomentSet::find(const MomentIndex& idx) const {
  const auto it = std::find(indices.begin(), indices.end(), idx);
  return it == indices.end() ? npos : static_cast<std::size_t>(it - indices.begin());
}

Complex MomentSet::at(const MomentIndex& idx) const {
  const std::size_t k = find(idx);
  if (k == npos) throw DomainError("moment " + describe(idx) + " not in set");
  return values[k];
}

double MomentSet::error_at(const MomentIndex& idx) const {
  const std::size_t k = find(idx);
  if (k == npos) throw DomainError("moment " + describe(idx) + " not in set");
  return errors[k];
}

int MomentSet::max_order() const {
  int o = 0;
  for (const auto& idx : indices) o = std::max(o, total_order(idx));
  return o;
}

void MomentSet::validate() const {
  if (values.size() != indices.size() || errors.size() != indices.size()) throw DomainError("moment arrays disagree");
  for (const auto& idx : indices) {
    if (idx.size() != modes.size()) throw DomainError("moment index arity differs from the mode count");
  }
}

MomentSet exact_moments(const DensityMatrix& rho, const std::vector<MomentIndex>& indices) {
  const Space& space = rho.space();
  MomentSet out;
  for (const auto& m : space.modes()) out.modes.push_back(m.name);
  for (const auto& idx : indices) {
    if (idx.size() != space.num_modes()) throw DomainError("moment index arity differs from the mode count");
    Matrix op = Matrix::Identity(1, 1);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const int d = space.mode(k).dim;
      const Matrix a = destroy_matrix(d);
      Matrix local = Matrix::Identity(d, d);
      for (int i = 0; i < idx[k].first; ++i) local = local * a.adjoint();
      for (int i = 0; i < idx[k].second; ++i) local = local * a;
      op = kron(op, local);
    }
    out.indices.push_back(idx);
    out.values.push_back((rho.matrix() * op).trace());
    out.errors.push_back(0.0);
  }
  return out;
}

namespace {

// Accumulates per-block sums of shot monomials, optionally weighted and
// restricted to a subset of shots, then deconvolves the noise mode.
class MomentEstimator {
 public:
  MomentEstimator(const QuadratureRecord& rec, const std::vector<MomentIndex>& indices, const MomentOptions& options)
      : rec_(rec), indices_(indices), options_(options) {
    rec.validate();
    if (rec.shots() == 0) throw DomainError("empty record");
    if (options.jackknife_blocks < 2) throw DomainError("jackknife needs at least two blocks");
    if (indices.empty()) throw DomainError("no moments requested");
    for (const auto& idx : indices) {
      if (idx.size() != rec.modes.size()) throw DomainError("moment index arity differs from the record");
      for (const auto& [n, m] : idx) max_power_ = std::max({max_power_, n, m});
    }
    std::map<MomentIndex, std::size_t> pos;
    for (std::size_t i = 0; i < indices.size(); ++i) pos[indices[i]] = i;
    // Closure under lowering any single power implies every dominated index is present.
    for (const auto& idx : indices) {
      for (std::size_t k = 0; k < idx.size(); ++k) {
        for (int side = 0; side < 2; ++side) {
          MomentIndex lower = idx;
          int& p = side == 0 ? lower[k].first : lower[k].second;
          if (p == 0) continue;
          --p;
          if (pos.count(lower) == 0) {
            throw DomainError("moment indices are not downward closed: " + describe(idx) + " needs " +
                              describe(lower));
          }
        }
      }
    }
    // Deconvolution terms: for each index, every dominated sub-index with its
    // binomial weight and the complementary noise index.
    terms_.resize(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
      for (std::size_t j = 0; j < indices.size(); ++j) {
        if (j == i || !dominated(indices[j], indices[i])) continue;
        MomentIndex rest(indices[i].size());
        double c = 1.0;
        for (std::size_t k = 0; k < rest.size(); ++k) {
          rest[k] = {indices[i][k].first - indices[j][k].first, indices[i][k].second - indices[j][k].second};
          c *= binomial(indices[i][k].first, indices[j][k].first) * binomial(indices[i][k].second, indices[j][k].second);
        }
        const auto it = pos.find(rest);
        if (it == pos.end()) throw DomainError("moment indices are not downward closed");
        terms_[i].push_back({j, it->second, c});
        if (pos.at(indices[j]) > i) throw DomainError("moment indices are not ordered by total order");
      }
    }
  }

  // weights: per-shot weight (empty = 1); mask: shots included (empty = all).
  MomentSet estimate(const std::vector<double>& weights, const std::vector<char>& mask) const {
    const std::size_t n_shots = rec_.shots();
    const std::size_t n_idx = indices_.size();
    const auto blocks = static_cast<std::size_t>(std::min<std::size_t>(options_.jackknife_blocks, n_shots));
    std::vector<std::vector<Complex>> sig(blocks, std::vector<Complex>(n_idx, 0.0));
    std::vector<std::vector<Complex>> ref(blocks, std::vector<Complex>(n_idx, 0.0));
    std::vector<double> sig_count(blocks, 0.0), ref_count(blocks, 0.0);

    const std::size_t modes = rec_.modes.size();
    const auto stride = static_cast<std::size_t>(max_power_ + 1);
    std::vector<Complex> pw(modes * stride), pw_conj(modes * stride);
    auto monomials = [&](const Matrix& data, std::size_t s, double w, std::vector<Complex>& acc) {
      for (std::size_t k = 0; k < modes; ++k) {
        const Complex z = data(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(k));
        Complex p = 1.0;
        for (std::size_t e = 0; e < stride; ++e) {
          pw[k * stride + e] = p;
          pw_conj[k * stride + e] = std::conj(p);
          p *= z;
        }
      }
      for (std::size_t i = 0; i < n_idx; ++i) {
        Complex v = w;
        const auto& idx = indices_[i];
        for (std::size_t k = 0; k < modes; ++k) {
          v *= pw_conj[k * stride + idx[k].first] * pw[k * stride + idx[k].second];
        }
        acc[i] += v;
      }
    };
    for (std::size_t s = 0; s < n_shots; ++s) {
      const std::size_t b = s * blocks / n_shots;
      monomials(rec_.reference, s, 1.0, ref[b]);
      ref_count[b] += 1.0;
      if (!mask.empty() && !mask[s]) continue;
      const double w = weights.empty() ? 1.0 : weights[s];
      if (w != 0.0) monomials(rec_.signal, s, w, sig[b]);
      sig_count[b] += 1.0;
    }

    auto totals = [&](const std::vector<std::vector<Complex>>& sums, const std::vector<double>& counts,
                      std::size_t skip) {
      std::vector<Complex> t(n_idx, 0.0);
      double c = 0.0;
      for (std::size_t b = 0; b < blocks; ++b) {
        if (b == skip) continue;
        for (std::size_t i = 0; i < n_idx; ++i) t[i] += sums[b][i];
        c += counts[b];
      }
      if (c == 0.0) throw DomainError("no shots selected for moment estimation");
      for (auto& v : t) v /= c;
      return t;
    };

    MomentSet out;
    out.modes = rec_.modes;
    out.indices = indices_;
    out.values = deconvolve(totals(sig, sig_count, blocks), totals(ref, ref_count, blocks));
    out.errors.assign(n_idx, 0.0);
    std::vector<std::vector<Complex>> leave_out;
    std::vector<Complex> mean(n_idx, 0.0);
    for (std::size_t b = 0; b < blocks; ++b) {
      leave_out.push_back(deconvolve(totals(sig, sig_count, b), totals(ref, ref_count, b)));
      for (std::size_t i = 0; i < n_idx; ++i) mean[i] += leave_out.back()[i] / static_cast<double>(blocks);
    }
    const double f = static_cast<double>(blocks - 1) / static_cast<double>(blocks);
    for (std::size_t i = 0; i < n_idx; ++i) {
      double acc = 0.0;
      for (const auto& lo : leave_out) acc += std::norm(lo[i] - mean[i]);
      out.errors[i] = std::sqrt(f * acc);
    }
    for (std::size_t i = 0; i < n_idx; ++i) {
      const int o = total_order(indices_[i]);
      if (o >= 1 && o <= 2 && out.errors[i] > options_.max_low_order_error) {
        throw NumericalError("moment deconvolution ill-conditioned: standard error " + std::to_string(out.errors[i]) +
                             " on " + describe(indices_[i]) + " (noise dominates the signal)");
      }
    }
    return out;
  }

 private:
  struct Term {
    std::size_t sub;
    std::size_t noise;
    double weight;
  };

  std::vector<Complex> deconvolve(const std::vector<Complex>& raw, const std::vector<Complex>& noise) const {
    std::vector<Complex> a(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      Complex v = raw[i];
      for (const auto& t : terms_[i]) v -= t.weight * a[t.sub] * noise[t.noise];
      a[i] = v;
    }
    return a;
  }

  const QuadratureRecord& rec_;
  std::vector<MomentIndex> indices_;
  MomentOptions options_;
  int max_power_ = 0;
  std::vector<std::vector<Term>> terms_;
};

}  // namespace

MomentSet estimate_moments(const QuadratureRecord& rec, const std::vector<MomentIndex>& indices,
                           const MomentOptions& options) {
  return MomentEstimator(rec, indices, options).estimate({}, {});
}

MomentSet estimate_moments(const QuadratureRecord& rec, int max_order, const MomentOptions& options) {
  if (max_order < 1) throw DomainError("max_order must be >= 1");
  return estimate_moments(rec, moment_indices_by_order(rec.modes.size(), max_order), options);
}

std::array<MomentSet, 4> estimate_joint_moments(const QuadratureRecord& rec, const std::vector<MomentIndex>& indices,
                                                const MomentOptions& options) {
  if (!rec.has_ancilla()) throw DomainError("record carries no ancilla outcomes");
  const MomentEstimator est(rec, indices, options);
  const std::size_t n = rec.shots();
  std::array<MomentSet, 4> out;
  std::vector<double> w(n);
  for (std::size_t s = 0; s < n; ++s) w[s] = rec.ancilla_outcome[s] != 0 ? 1.0 : 0.0;
  out[0] = est.estimate(w, {});
  constexpr std::array<AncillaBasis, 3> kBases{AncillaBasis::x, AncillaBasis::y, AncillaBasis::z};
  for (std::size_t p = 0; p < 3; ++p) {
    std::vector<char> mask(n);
    for (std::size_t s = 0; s < n; ++s) {
      mask[s] = rec.ancilla_basis[s] == kBases[p];
      w[s] = rec.ancilla_outcome[s];
    }
    out[p + 1] = est.estimate(w, mask);
  }
  return out;
}

namespace {

// Basis states of `space` (flat indices) with total occupation <= cap.
std::vector<int> capped_basis(const Space& space, int cap) {
  std::vector<int> out;
  for (int i = 0; i < space.dimension(); ++i) {
    const auto occ = space.occupations(i);
    if (cap < 0 || std::accumulate(occ.begin(), occ.end(), 0) <= cap) out.push_back(i);
  }
  return out;
}

// <y| prod (a^dag)^n a^m |x> per mode, or 0.
double ladder_element(const std::vector<int>& y, const std::vector<int>& x, const MomentIndex& idx) {
  double v = 1.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const int n = idx[k].first, m = idx[k].second;
    if (x[k] < m || y[k] != x[k] - m + n) return 0.0;
    double f = 1.0;
    for (int j = x[k] - m + 1; j <= x[k]; ++j) f *= j;
    for (int j = x[k] - m + 1; j <= y[k]; ++j) f *= j;
    v *= std::sqrt(f);
  }
  return v;
}

Space space_for(const std::vector<std::string>& modes, const std::vector<int>& dims) {
  if (dims.size() != modes.size()) throw DomainError("dims must give one dimension per mode");
  std::vector<ModeLabel> labels;
  for (std::size_t k = 0; k < modes.size(); ++k) labels.emplace_back(modes[k], dims[k]);
  return Space(labels);
}

}  // namespace

Matrix operator_from_moments(const MomentSet& m, const Space& space, int photon_cap, double* residual) {
  m.validate();
  if (m.modes.size() != space.num_modes()) throw DomainError("moment modes differ from the target space");
  const std::vector<int> basis = capped_basis(space, photon_cap);
  const auto nb = static_cast<Eigen::Index>(basis.size());
  std::vector<std::vector<int>> occ;
  for (int i : basis) occ.push_back(space.occupations(i));

  double max_err = 0.0;
  for (double e : m.errors) max_err = std::max(max_err, e);
  const double floor = std::max(1e-12, 1e-3 * max_err);

  std::vector<Eigen::Index> rows;
  Matrix a(static_cast<Eigen::Index>(m.indices.size()), nb * nb);
  Vector b(static_cast<Eigen::Index>(m.indices.size()));
  Eigen::Index r = 0;
  for (std::size_t i = 0; i < m.indices.size(); ++i) {
    const double w = max_err > 0.0 ? 1.0 / std::max(m.errors[i], floor) : 1.0;
    bool any = false;
    for (Eigen::Index x = 0; x < nb; ++x) {
      for (Eigen::Index y = 0; y < nb; ++y) {
        // Tr(X O) = sum_xy X_xy O_yx.
        const double o = ladder_element(occ[y], occ[x], m.indices[i]);
        a(r, x * nb + y) = w * o;
        any = any || o != 0.0;
      }
    }
    if (!any) continue;
    b(r) = w * m.values[i];
    ++r;
  }
  a.conservativeResize(r, nb * nb);
  b.conservativeResize(r);

  const Eigen::ColPivHouseholderQR<Matrix> qr(a);
  if (qr.rank() < nb * nb) {
    std::set<int> missing;
    for (Eigen::Index x = 0; x < nb; ++x) {
      for (Eigen::Index y = 0; y < nb; ++y) {
        MomentIndex need(occ[x].size());
        for (std::size_t k = 0; k < need.size(); ++k) need[k] = {occ[x][k], occ[y][k]};
        if (m.find(need) == MomentSet::npos) missing.insert(total_order(need));
      }
    }
    std::string orders;
    for (int o : missing) orders += (orders.empty() ? "" : ", ") + std::to_string(o);
    throw NumericalError("moment system is rank deficient (rank " + std::to_string(qr.rank()) + " of " +
                         std::to_string(nb * nb) + "); missing moment orders: " + (orders.empty() ? "none" : orders));
  }
  const Vector sol = qr.solve(b);
  if (residual) *residual = (a * sol - b).norm();

  const int d = space.dimension();
  Matrix x = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < nb; ++i) {
    for (Eigen::Index j = 0; j < nb; ++j) x(basis[i], basis[j]) = sol(i * nb + j);
  }
  return 0.5 * (x + x.adjoint());
}

DensityMatrix physical_projection(const Space& space, const Matrix& x, double* clip) {
  const Matrix h = 0.5 * (x + x.adjoint());
  const double tr = h.trace().real();
  if (!(tr > 0.0)) throw NumericalError("reconstructed operator has non-positive trace");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h / tr);
  if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  Eigen::VectorXd lambda = eig.eigenvalues();
  double removed = 0.0;
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    if (lambda(k) < 0.0) {
      removed -= lambda(k);
      lambda(k) = 0.0;
    }
  }
  const double total = lambda.sum();
  if (!(total > 0.0)) throw NumericalError("reconstructed state has no positive part");
  if (clip) *clip = removed;
  Matrix rho = eig.eigenvectors() * (lambda / total).cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
  return DensityMatrix(space, 0.5 * (rho + rho.adjoint()));
}

Reconstruction rho_from_moments(const MomentSet& m, const std::vector<int>& dims, int photon_cap) {
  const Space space = space_for(m.modes, dims);
  Reconstruction out;
  const Matrix x = operator_from_moments(m, space, photon_cap, &out.residual);
  out.rho = physical_projection(space, x, &out.clip);
  return out;
}

Reconstruction joint_rho_from_moments(const std::array<MomentSet, 4>& m, const std::vector<int>& dims,
                                      int photon_cap) {
  const Space field = space_for(m[0].modes, dims);
  const Space space = Space({ModeLabel("q", 2)}).concat(field);
  Matrix pauli[4] = {Matrix::Identity(2, 2), Matrix::Zero(2, 2), Matrix::Zero(2, 2), Matrix::Zero(2, 2)};
  pauli[1] << 0.0, 1.0, 1.0, 0.0;
  pauli[2] << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  pauli[3] << 1.0, 0.0, 0.0, -1.0;
  Reconstruction out;
  Matrix x = Matrix::Zero(space.dimension(), space.dimension());
  for (int p = 0; p < 4; ++p) {
    if (m[p].modes != m[0].modes) throw DomainError("joint moment sets disagree on modes");
    double res = 0.0;
    x += 0.5 * kron(pauli[p], operator_from_moments(m[p], field, photon_cap, &res));
    out.residual = std::hypot(out.residual, res);
  }
  out.rho = physical_projection(space, x, &out.clip);
  return out;
}

DensityMatrix project_subspace(const DensityMatrix& rho, const std::vector<std::vector<int>>& basis) {
  if (basis.empty()) throw DomainError("projection basis is empty");
  const Space& space = rho.space();
  std::vector<int> keep;
  for (const auto& occ : basis) {
    if (occ.size() != space.num_modes()) throw DomainError("basis label arity differs from the space");
    keep.push_back(space.index(occ));
  }
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  const int d = space.dimension();
  Matrix out = Matrix::Zero(d, d);
  for (int i : keep) {
    for (int j : keep) out(i, j) = rho.matrix()(i, j);
  }
  const double w = out.trace().real();
  if (!(w > 1e-6)) throw NumericalError("state has vanishing support on the projection subspace");
  return DensityMatrix(space, out / w);
}

std::vector<std::vector<int>> single_photon_basis(const Space& space, const std::vector<std::string>& photonic,
                                                  int other_levels) {
  std::vector<bool> is_photonic(space.num_modes(), false);
  for (const auto& name : photonic) is_photonic[space.index_of(name)] = true;
  std::vector<std::vector<int>> out;
  for (int i = 0; i < space.dimension(); ++i) {
    const auto occ = space.occupations(i);
    int photons = 0;
    bool ok = true;
    for (std::size_t k = 0; k < occ.size(); ++k) {
      if (is_photonic[k]) {
        photons += occ[k];
      } else if (occ[k] >= other_levels) {
        ok = false;
      }
    }
    if (ok && photons == 1) out.push_back(occ);
  }
  return out;
}

TomographyResult reconstruct(const QuadratureRecord& rec, const ReconstructionSpec& spec, const Vector& target) {
  TomographyResult out;
  if (spec.joint) {
    out.reconstruction = joint_rho_from_moments(estimate_joint_moments(rec, spec.indices, spec.moments), spec.dims,
                                                spec.photon_cap);
  } else {
    out.reconstruction =
        rho_from_moments(estimate_moments(rec, spec.indices, spec.moments), spec.dims, spec.photon_cap);
  }
  out.projected = spec.projection.empty() ? out.reconstruction.rho
                                          : project_subspace(out.reconstruction.rho, spec.projection);
  out.fidelity = fidelity(out.projected, target);
  return out;
}

namespace {

QuadratureRecord resample(const QuadratureRecord& rec, std::uint64_t seed) {
  const std::size_t n = rec.shots();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  QuadratureRecord out;
  out.modes = rec.modes;
  out.added_quanta = rec.added_quanta;
  out.signal.resize(rec.signal.rows(), rec.signal.cols());
  out.reference.resize(rec.reference.rows(), rec.reference.cols());
  if (rec.has_ancilla()) {
    out.ancilla_basis.resize(n);
    out.ancilla_outcome.resize(n);
  }
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t j = pick(rng);
    const std::size_t k = pick(rng);
    out.signal.row(static_cast<Eigen::Index>(s)) = rec.signal.row(static_cast<Eigen::Index>(j));
    out.reference.row(static_cast<Eigen::Index>(s)) = rec.reference.row(static_cast<Eigen::Index>(k));
    if (rec.has_ancilla()) {
      out.ancilla_basis[s] = rec.ancilla_basis[j];
      out.ancilla_outcome[s] = rec.ancilla_outcome[j];
    }
  }
  return out;
}

}  // namespace

BootstrapResult bootstrap_fidelity(const QuadratureRecord& rec, const ReconstructionSpec& spec, const Vector& target,
                                   int resamples, std::uint64_t seed, unsigned workers) {
  if (resamples < 100) throw DomainError("bootstrap needs at least 100 resamples");
  BootstrapResult out;
  out.samples.assign(static_cast<std::size_t>(resamples), 0.0);
  parallel_for(
      out.samples.size(),
      [&](std::size_t r) { out.samples[r] = reconstruct(resample(rec, derive_seed(seed, r)), spec, target).fidelity; },
      workers);
  for (double f : out.samples) out.mean += f / resamples;
  double var = 0.0;
  for (double f : out.samples) var += (f - out.mean) * (f - out.mean);
  out.std_error = std::sqrt(var / (resamples - 1));
  return out;
}

std::string density_matrix_json(const DensityMatrix& rho) {
  nlohmann::json j;
  std::vector<std::string> modes;
  std::vector<int> dims;
  for (const auto& m : rho.space().modes()) {
    modes.push_back(m.name);
    dims.push_back(m.dim);
  }
  j["modes"] = modes;
  j["dims"] = dims;
  const Matrix& r = rho.matrix();
  std::vector<std::vector<double>> re(r.rows(), std::vector<double>(r.cols()));
  std::vector<std::vector<double>> im(r.rows(), std::vector<double>(r.cols()));
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    for (Eigen::Index k = 0; k < r.cols(); ++k) {
      re[i][k] = r(i, k).real();
      im[i][k] = r(i, k).imag();
    }
  }
  j["re"] = re;
  j["im"] = im;
  return j.dump();
}

std::string moments_json(const MomentSet& m) {
  m.validate();
  nlohmann::json j;
  j["modes"] = m.modes;
  j["moments"] = nlohmann::json::array();
  for (std::size_t i = 0; i < m.indices.size(); ++i) {
    nlohmann::json idx = nlohmann::json::array();
    for (const auto& [n, k] : m.indices[i]) idx.push_back({n, k});
    j["moments"].push_back({{"index", idx}, {"re", m.values[i].real()}, {"im", m.values[i].imag()}, {"err", m.errors[i]}});
  }
  return j.dump();
}

}  // namespace qlight
