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

// Field-moment estimation from heterodyne records and density-matrix
// reconstruction by linear inversion of normally ordered moments.

#ifndef QLIGHT_TOMOGRAPHY_HPP
#define QLIGHT_TOMOGRAPHY_HPP

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qlight/fockspace.hpp"
#include "qlight/measurement.hpp"

namespace qlight {

/// Per-mode powers (n_k, m_k) of <prod_k (a_k^dag)^n_k a_k^m_k>.
using MomentIndex = std::vector<std::pair<int, int>>;

int total_order(const MomentIndex& idx);

/// Indices with n_k, m_k <= max_power[k] and, when photon_cap >= 0,
/// sum n_k <= photon_cap and sum m_k <= photon_cap. Ordered so that every
/// index follows all indices it dominates.
std::vector<MomentIndex> moment_indices(const std::vector<int>& max_power, int photon_cap = -1);

/// All indices of total order sum(n_k + m_k) <= max_order.
std::vector<MomentIndex> moment_indices_by_order(std::size_t modes, int max_order);

struct MomentSet {
  std::vector<std::string> modes;
  std::vector<MomentIndex> indices;
  std::vector<Complex> values;
  /// Standard errors (jackknife); zero for exact moments.
  std::vector<double> errors;

  std::size_t find(const MomentIndex& idx) const;  // npos when absent
  Complex at(const MomentIndex& idx) const;
  double error_at(const MomentIndex& idx) const;
  int max_order() const;
  void validate() const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Moments of a known state (any index; powers beyond the truncation give 0).
MomentSet exact_moments(const DensityMatrix& rho, const std::vector<MomentIndex>& indices);

struct MomentOptions {
  int jackknife_blocks = 20;
  /// Largest acceptable standard error of an order-1/2 moment before the
  /// deconvolution is declared ill-conditioned.
  double max_low_order_error = 0.5;
};

/// Signal moments <(a^dag)^n a^m> deconvolved from the noise mode, with
/// jackknife errors. `indices` must be downward closed.
MomentSet estimate_moments(const QuadratureRecord& rec, const std::vector<MomentIndex>& indices,
                           const MomentOptions& options = {});
MomentSet estimate_moments(const QuadratureRecord& rec, int max_order, const MomentOptions& options = {});

/// Moments weighted by the ancilla outcome: element 0 uses weight 1 on
/// every shot inside the qubit subspace, elements 1..3 use the +-1 outcome
/// of shots measured in X, Y, Z. Each entry estimates
/// Tr[(sigma_P (x) prod a^dag^n a^m) rho] over the qubit subspace.
std::array<MomentSet, 4> estimate_joint_moments(const QuadratureRecord& rec, const std::vector<MomentIndex>& indices,
                                                const MomentOptions& options = {});

struct Reconstruction {
  DensityMatrix rho = DensityMatrix::vacuum(Space{});
  /// Sum of |negative eigenvalues| removed (relative to unit trace).
  double clip = 0.0;
  /// Weighted residual norm of the moment equations.
  double residual = 0.0;
};

/// Hermitian operator X supported on photon-capped states of `space` with
/// Tr(X O_idx) matching the moments in the weighted least-squares sense.
/// Throws NumericalError naming missing orders when underdetermined.
Matrix operator_from_moments(const MomentSet& m, const Space& space, int photon_cap = -1, double* residual = nullptr);

/// Linear inversion followed by the physical projection: normalize, clip
/// negative eigenvalues, renormalize.
Reconstruction rho_from_moments(const MomentSet& m, const std::vector<int>& dims, int photon_cap = -1);

/// Joint state of a transmon qubit "q" and the field modes from the four
/// ancilla-weighted moment sets.
Reconstruction joint_rho_from_moments(const std::array<MomentSet, 4>& m, const std::vector<int>& dims,
                                      int photon_cap = -1);

/// Positive semidefinite, unit-trace version of a Hermitian matrix.
DensityMatrix physical_projection(const Space& space, const Matrix& x, double* clip = nullptr);

/// P rho P / Tr(P rho P) on the span of the listed basis states (occupations
/// per mode); the result lives on the same space.
DensityMatrix project_subspace(const DensityMatrix& rho, const std::vector<std::vector<int>>& basis);

/// States of `space` with exactly one photon across `photonic` modes and the
/// remaining modes at any level below `other_levels`.
std::vector<std::vector<int>> single_photon_basis(const Space& space, const std::vector<std::string>& photonic,
                                                  int other_levels = 2);

struct ReconstructionSpec {
  std::vector<int> dims;
  int photon_cap = -1;
  std::vector<MomentIndex> indices;
  /// Projection basis on the reconstructed space; empty means no projection.
  std::vector<std::vector<int>> projection;
  /// Reconstruct the joint qubit-field state from ancilla outcomes.
  bool joint = false;
  MomentOptions moments;
};

struct TomographyResult {
  Reconstruction reconstruction;
  DensityMatrix projected = DensityMatrix::vacuum(Space{});
  double fidelity = 0.0;
};

/// Record -> moments -> state -> projection -> fidelity to `target`
/// (a vector on the reconstructed space).
TomographyResult reconstruct(const QuadratureRecord& rec, const ReconstructionSpec& spec, const Vector& target);

struct BootstrapResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::vector<double> samples;
};

/// Resamples shots with replacement and repeats reconstruct().
BootstrapResult bootstrap_fidelity(const QuadratureRecord& rec, const ReconstructionSpec& spec, const Vector& target,
                                   int resamples, std::uint64_t seed, unsigned workers = 1);

/// JSON text: {"modes": [...], "dims": [...], "re": [[...]], "im": [[...]]}.
std::string density_matrix_json(const DensityMatrix& rho);
std::string moments_json(const MomentSet& m);

}  // namespace qlight

#endif  // QLIGHT_TOMOGRAPHY_HPP
