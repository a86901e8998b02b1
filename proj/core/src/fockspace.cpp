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

#include "qlight/fockspace.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Eigenvalues>

namespace qlight {

ModeLabel::ModeLabel(std::string name_, int dim_) : name(std::move(name_)), dim(dim_) {
  if (name.empty()) throw DomainError("mode label needs a non-empty name");
  if (dim < 2) throw DomainError("mode '" + name + "' must have dimension >= 2");
}

Space::Space(std::vector<ModeLabel> modes) : modes_(std::move(modes)) {
  std::set<std::string> seen;
  for (const auto& m : modes_) {
    if (m.dim < 2) throw DomainError("mode '" + m.name + "' must have dimension >= 2");
    if (!seen.insert(m.name).second) throw DomainError("duplicate mode label '" + m.name + "'");
    dimension_ *= m.dim;
  }
}

bool Space::contains(std::string_view name) const {
  return std::any_of(modes_.begin(), modes_.end(), [&](const ModeLabel& m) { return m.name == name; });
}

std::size_t Space::index_of(std::string_view name) const {
  for (std::size_t k = 0; k < modes_.size(); ++k) {
    if (modes_[k].name == name) return k;
  }
  throw DomainError("unknown mode label '" + std::string(name) + "'");
}

std::vector<int> Space::occupations(int index) const {
  std::vector<int> occ(modes_.size());
  for (std::size_t k = modes_.size(); k-- > 0;) {
    occ[k] = index % modes_[k].dim;
    index /= modes_[k].dim;
  }
  return occ;
}

int Space::index(std::span<const int> occ) const {
  if (occ.size() != modes_.size()) throw DomainError("occupation list length does not match the space");
  int idx = 0;
  for (std::size_t k = 0; k < modes_.size(); ++k) {
    if (occ[k] < 0 || occ[k] >= modes_[k].dim) {
      throw DomainError("occupation out of range for mode '" + modes_[k].name + "'");
    }
    idx = idx * modes_[k].dim + occ[k];
  }
  return idx;
}

Space Space::concat(const Space& other) const {
  auto all = modes_;
  all.insert(all.end(), other.modes_.begin(), other.modes_.end());
  return Space(std::move(all));
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix destroy_matrix(int dim) {
  Matrix a = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Operator::Operator(Space space, Matrix matrix) : space_(std::move(space)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != space_.dimension() || matrix_.cols() != space_.dimension()) {
    throw DomainError("operator matrix size does not match the product of mode dimensions");
  }
}

Operator Operator::identity(const Space& space) {
  return {space, Matrix::Identity(space.dimension(), space.dimension())};
}

Operator Operator::embed(const Space& space, std::string_view mode, const Matrix& local) {
  const std::size_t target = space.index_of(mode);
  if (local.rows() != space.mode(target).dim || local.cols() != space.mode(target).dim) {
    throw DomainError("local operator size does not match mode '" + std::string(mode) + "'");
  }
  Matrix full = Matrix::Identity(1, 1);
  for (std::size_t k = 0; k < space.num_modes(); ++k) {
    const int d = space.mode(k).dim;
    full = kron(full, k == target ? local : Matrix::Identity(d, d));
  }
  return {space, std::move(full)};
}

Operator Operator::destroy(const Space& space, std::string_view mode) {
  return embed(space, mode, destroy_matrix(space.mode(space.index_of(mode)).dim));
}

Operator Operator::number(const Space& space, std::string_view mode) {
  const Operator a = destroy(space, mode);
  return a.adjoint() * a;
}

Operator operator*(const Operator& a, const Operator& b) {
  if (!(a.space_ == b.space_)) throw DomainError("operator spaces differ");
  return {a.space_, a.matrix_ * b.matrix_};
}

Operator operator+(const Operator& a, const Operator& b) {
  if (!(a.space_ == b.space_)) throw DomainError("operator spaces differ");
  return {a.space_, a.matrix_ + b.matrix_};
}

Operator operator*(Complex s, const Operator& a) { return {a.space_, s * a.matrix_}; }

double min_eigenvalue(const Matrix& m) {
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

DensityMatrix::DensityMatrix(Space space, Matrix matrix) : space_(std::move(space)), matrix_(std::move(matrix)) {
  const int d = space_.dimension();
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw DomainError("density matrix size does not match the product of mode dimensions");
  }
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
    throw DomainError("density matrix is not Hermitian");
  }
  const Complex tr = matrix_.trace();
  if (std::abs(tr.real() - 1.0) > kTraceTol || std::abs(tr.imag()) > kTraceTol) {
    throw DomainError("density matrix trace is not 1");
  }
  if (min_eigenvalue(matrix_) < -kPositivityTol) {
    throw DomainError("density matrix has a negative eigenvalue");
  }
}

Vector basis_vector(const Space& space, std::span<const int> occupations) {
  Vector v = Vector::Zero(space.dimension());
  v(space.index(occupations)) = 1.0;
  return v;
}

DensityMatrix DensityMatrix::pure(const Space& space, const Vector& psi) {
  if (psi.size() != space.dimension()) throw DomainError("state vector size does not match the space");
  const double nrm = psi.norm();
  if (nrm == 0.0) throw DomainError("zero state vector");
  const Vector v = psi / nrm;
  return {space, v * v.adjoint()};
}

DensityMatrix DensityMatrix::basis(const Space& space, std::span<const int> occupations) {
  return pure(space, basis_vector(space, occupations));
}

DensityMatrix DensityMatrix::vacuum(const Space& space) {
  const std::vector<int> zeros(space.num_modes(), 0);
  return basis(space, zeros);
}

Complex DensityMatrix::expectation(const Operator& op) const {
  if (!(op.space() == space_)) throw DomainError("operator space differs from state space");
  return (matrix_ * op.matrix()).trace();
}

double DensityMatrix::mean_occupation(std::string_view mode) const {
  return expectation(Operator::number(space_, mode)).real();
}

Operator tensor(const Operator& a, const Operator& b) {
  Space s = a.space().concat(b.space());
  return {std::move(s), kron(a.matrix(), b.matrix())};
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  Space s = a.space().concat(b.space());
  return {std::move(s), kron(a.matrix(), b.matrix())};
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::string> keep) {
  const Space& full = rho.space();
  std::vector<bool> kept(full.num_modes(), false);
  for (const auto& name : keep) {
    const std::size_t k = full.index_of(name);
    if (kept[k]) throw DomainError("mode '" + name + "' listed twice");
    kept[k] = true;
  }
  std::vector<ModeLabel> kept_modes;
  std::vector<ModeLabel> traced_modes;
  for (std::size_t k = 0; k < full.num_modes(); ++k) {
    (kept[k] ? kept_modes : traced_modes).push_back(full.mode(k));
  }
  const Space reduced(kept_modes);
  const Space env(traced_modes);

  // Precompute, for every full index, its kept and traced sub-indices.
  const int d = full.dimension();
  std::vector<int> keep_idx(d);
  std::vector<int> env_idx(d);
  for (int i = 0; i < d; ++i) {
    const auto occ = full.occupations(i);
    int ki = 0;
    int ei = 0;
    for (std::size_t k = 0; k < occ.size(); ++k) {
      if (kept[k]) {
        ki = ki * full.mode(k).dim + occ[k];
      } else {
        ei = ei * full.mode(k).dim + occ[k];
      }
    }
    keep_idx[i] = ki;
    env_idx[i] = ei;
  }
  Matrix out = Matrix::Zero(reduced.dimension(), reduced.dimension());
  const Matrix& m = rho.matrix();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (env_idx[i] == env_idx[j]) out(keep_idx[i], keep_idx[j]) += m(i, j);
    }
  }
  out = 0.5 * (out + out.adjoint()).eval();
  return {reduced, std::move(out)};
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::string> keep) {
  const std::vector<std::string> v(keep);
  return partial_trace(rho, std::span<const std::string>(v));
}

std::vector<Matrix> loss_kraus(int dim, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("transmissivity must lie in [0, 1]");
  std::vector<Matrix> kraus;
  kraus.reserve(dim);
  for (int k = 0; k < dim; ++k) {
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = k; n < dim; ++n) {
      // sqrt(C(n,k)) eta^((n-k)/2) (1-eta)^(k/2)
      const double binom = std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
      a(n - k, n) = std::sqrt(binom) * std::pow(eta, 0.5 * (n - k)) * std::pow(1.0 - eta, 0.5 * k);
    }
    kraus.push_back(std::move(a));
  }
  return kraus;
}

DensityMatrix apply_loss(const DensityMatrix& rho, std::string_view mode, double eta) {
  const Space& space = rho.space();
  const int dim = space.mode(space.index_of(mode)).dim;
  const auto kraus = loss_kraus(dim, eta);
  if (eta == 1.0) return rho;
  Matrix out = Matrix::Zero(rho.dimension(), rho.dimension());
  for (const auto& k : kraus) {
    const Matrix full = Operator::embed(space, mode, k).matrix();
    out.noalias() += full * rho.matrix() * full.adjoint();
  }
  out = 0.5 * (out + out.adjoint()).eval();
  return {space, std::move(out)};
}

double fidelity(const DensityMatrix& rho, const Vector& target) {
  if (target.size() != rho.dimension()) throw DomainError("target dimension does not match the state");
  if (std::abs(target.norm() - 1.0) > 1e-9) throw DomainError("fidelity target must be normalized");
  return std::clamp((target.adjoint() * rho.matrix() * target)(0, 0).real(), 0.0, 1.0);
}

std::vector<double> wigner(const DensityMatrix& rho, std::span<const Complex> points) {
  if (rho.space().num_modes() != 1) throw DomainError("wigner requires a single-mode state");
  const int d = rho.dimension();
  const Matrix& m = rho.matrix();
  std::vector<double> out;
  out.reserve(points.size());
  for (const Complex& z : points) {
    const Complex alpha = z / std::sqrt(2.0);
    const double r2 = std::norm(alpha);
    const double gauss = std::exp(-2.0 * r2);
    Complex w = 0.0;
    // W_{|p><q|}(alpha) for p >= q:
    //   (2/pi) (-1)^q sqrt(q!/p!) (2 conj(alpha))^(p-q) e^{-2|alpha|^2} L_q^{(p-q)}(4|alpha|^2)
    for (int p = 0; p < d; ++p) {
      for (int q = 0; q <= p; ++q) {
        const int diff = p - q;
        const double lag = std::assoc_laguerre(static_cast<unsigned>(q), static_cast<unsigned>(diff), 4.0 * r2);
        const double pref = (q % 2 == 0 ? 1.0 : -1.0) *
                            std::exp(0.5 * (std::lgamma(q + 1.0) - std::lgamma(p + 1.0)));
        const Complex term = pref * std::pow(2.0 * std::conj(alpha), diff) * gauss * lag;
        if (diff == 0) {
          w += m(p, p) * term;
        } else {
          w += 2.0 * (m(p, q) * term).real();
        }
      }
    }
    // Quadrature units halve the amplitude-plane density.
    out.push_back(w.real() / kPi);
  }
  return out;
}

}  // namespace qlight
