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

// Finite-dimensional Hilbert-space algebra over labeled tensor products of
// truncated modes. Basis ordering is row-major in the mode list: the last
// mode varies fastest, matching a Kronecker product taken left to right.

#ifndef QLIGHT_FOCKSPACE_HPP
#define QLIGHT_FOCKSPACE_HPP

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qlight/common.hpp"

namespace qlight {

struct ModeLabel {
  std::string name;
  int dim = 2;

  ModeLabel() = default;
  ModeLabel(std::string name, int dim);

  bool operator==(const ModeLabel&) const = default;
};

/// Ordered list of modes with unique names.
class Space {
 public:
  Space() = default;
  explicit Space(std::vector<ModeLabel> modes);

  std::size_t num_modes() const { return modes_.size(); }
  const std::vector<ModeLabel>& modes() const { return modes_; }
  const ModeLabel& mode(std::size_t k) const { return modes_.at(k); }
  /// Product of mode dimensions (1 for the empty space).
  int dimension() const { return dimension_; }

  bool contains(std::string_view name) const;
  /// Position of `name` in the mode list; throws DomainError when absent.
  std::size_t index_of(std::string_view name) const;

  /// Occupation (level) of each mode for a flat basis index.
  std::vector<int> occupations(int index) const;
  /// Flat basis index for per-mode occupations.
  int index(std::span<const int> occupations) const;

  /// Concatenation; throws DomainError on duplicate names.
  Space concat(const Space& other) const;

  bool operator==(const Space&) const = default;

 private:
  std::vector<ModeLabel> modes_;
  int dimension_ = 1;
};

class Operator {
 public:
  Operator(Space space, Matrix matrix);

  const Space& space() const { return space_; }
  const Matrix& matrix() const { return matrix_; }

  static Operator identity(const Space& space);
  /// Truncated annihilation operator of `mode`, identity elsewhere.
  static Operator destroy(const Space& space, std::string_view mode);
  static Operator number(const Space& space, std::string_view mode);
  /// Places a single-mode matrix on `mode` inside `space`.
  static Operator embed(const Space& space, std::string_view mode, const Matrix& local);

  Operator adjoint() const { return {space_, matrix_.adjoint()}; }

  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator*(Complex s, const Operator& a);

 private:
  Space space_;
  Matrix matrix_;
};

/// A validated density matrix: Hermitian to 1e-10, unit trace to 1e-9 and
/// eigenvalues no lower than -1e-9.
class DensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-10;
  static constexpr double kTraceTol = 1e-9;
  static constexpr double kPositivityTol = 1e-9;

  DensityMatrix(Space space, Matrix matrix);

  static DensityMatrix pure(const Space& space, const Vector& psi);
  /// Pure product basis state |occupations>.
  static DensityMatrix basis(const Space& space, std::span<const int> occupations);
  static DensityMatrix vacuum(const Space& space);

  const Space& space() const { return space_; }
  const Matrix& matrix() const { return matrix_; }
  int dimension() const { return space_.dimension(); }

  Complex expectation(const Operator& op) const;
  /// <n> of one mode.
  double mean_occupation(std::string_view mode) const;

 private:
  Space space_;
  Matrix matrix_;
};

/// Column vector of a product basis state.
Vector basis_vector(const Space& space, std::span<const int> occupations);

/// Single-mode truncated annihilation matrix of dimension `dim`.
Matrix destroy_matrix(int dim);

/// Dense Kronecker product.
Matrix kron(const Matrix& a, const Matrix& b);

Operator tensor(const Operator& a, const Operator& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Reduced state on `keep`, preserving the original mode order.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::string> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::string> keep);

/// Kraus operators of the pure-loss channel with transmissivity `eta` on a
/// mode of dimension `dim`.
std::vector<Matrix> loss_kraus(int dim, double eta);

/// Pure-loss channel (beamsplitter onto a traced vacuum ancilla) on one mode.
DensityMatrix apply_loss(const DensityMatrix& rho, std::string_view mode, double eta);

/// <psi|rho|psi> for a normalized pure target.
double fidelity(const DensityMatrix& rho, const Vector& target);

/// Wigner function of a single-mode state at points z = x + i p in
/// quadrature units (z = sqrt(2) alpha), normalized so that its integral over
/// the z plane is one; the vacuum gives 1/pi at the origin.
std::vector<double> wigner(const DensityMatrix& rho, std::span<const Complex> points);

/// Smallest eigenvalue of the Hermitian part.
double min_eigenvalue(const Matrix& m);

}  // namespace qlight

#endif  // QLIGHT_FOCKSPACE_HPP
