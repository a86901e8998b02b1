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

#include <set>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "generators.hpp"
#include "qlight/measurement.hpp"
#include "qlight/sequences.hpp"
#include "qlight/tomography.hpp"

namespace qlight {
namespace {

const Space kOne({ModeLabel("p", 2)});
const Space kTwo({ModeLabel("E", 2), ModeLabel("L", 2)});

NoiseModel amplifier(double nbar, double transmissivity = 1.0) {
  NoiseModel m;
  m.added_quanta = nbar;
  m.split = 1.0;
  m.detection_efficiency = transmissivity;
  return m;
}

DensityMatrix fock_one_after_loss(double eta) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0 - eta;
  m(1, 1) = eta;
  return {kOne, m};
}

// Moments <(a^dag)^n a^m> of a single-mode state computed directly.
Complex direct_moment(const Matrix& rho, int n, int m) {
  const Matrix a = destroy_matrix(static_cast<int>(rho.rows()));
  Matrix op = Matrix::Identity(rho.rows(), rho.rows());
  for (int k = 0; k < n; ++k) op = op * a.adjoint();
  for (int k = 0; k < m; ++k) op = op * a;
  return (rho * op).trace();
}

TEST(Indices, OrderedAndDownwardClosed) {
  for (const auto& indices : {moment_indices({2, 2}), moment_indices({1, 1, 1}, 1), moment_indices_by_order(2, 4)}) {
    std::set<MomentIndex> seen;
    for (const MomentIndex& idx : indices) {
      for (std::size_t k = 0; k < idx.size(); ++k) {
        for (int side = 0; side < 2; ++side) {
          MomentIndex lower = idx;
          int& p = side == 0 ? lower[k].first : lower[k].second;
          if (p == 0) continue;
          --p;
          EXPECT_TRUE(seen.count(lower)) << "dominated index must come first";
        }
      }
      seen.insert(idx);
    }
  }
  EXPECT_EQ(moment_indices({1, 1}, 1).size(), 9u);  // 3 power vectors squared
  EXPECT_EQ(moment_indices({2}).size(), 9u);
}

TEST(ExactMoments, MatchDirectComputation) {
  gen::Engine rng(1);
  const Space s({ModeLabel("p", 4)});
  const DensityMatrix rho(s, gen::density(rng, 4));
  const MomentSet m = exact_moments(rho, moment_indices({4}));
  for (std::size_t i = 0; i < m.indices.size(); ++i) {
    const auto [n, k] = m.indices[i][0];
    EXPECT_LT(std::abs(m.values[i] - direct_moment(rho.matrix(), n, k)), 1e-12);
  }
}

TEST(Inversion, LossyFockOneRoundTrip) {
  const DensityMatrix rho = fock_one_after_loss(0.828);
  const Reconstruction r = rho_from_moments(exact_moments(rho, moment_indices({1})), {2});
  EXPECT_LT(gen::max_abs(r.rho.matrix() - rho.matrix()), 1e-10);
}

TEST(Inversion, TwoModeSinglePhotonSuperposition) {
  Vector psi = Vector::Zero(4);
  psi(1) = psi(2) = std::sqrt(0.5);
  const DensityMatrix rho = DensityMatrix::pure(kTwo, psi);
  const Reconstruction r = rho_from_moments(exact_moments(rho, moment_indices({1, 1}, 1)), {2, 2}, 1);
  EXPECT_NEAR(fidelity(r.rho, psi), 1.0, 1e-10);
}

TEST(Inversion, PropertyRandomStatesRoundTripExactly) {
  gen::Engine rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const int modes = gen::integer(rng, 1, 2);
    const Space s = gen::space(rng, modes, 3);
    std::vector<int> dims, powers;
    for (const auto& m : s.modes()) {
      dims.push_back(m.dim);
      powers.push_back(m.dim - 1);
    }
    const DensityMatrix rho(s, gen::density(rng, s.dimension()));
    MomentSet m = exact_moments(rho, moment_indices(powers));
    const Reconstruction r = rho_from_moments(m, dims);
    EXPECT_LT(gen::max_abs(r.rho.matrix() - rho.matrix()), 1e-10) << "trial " << trial;
    EXPECT_LT(r.clip, 1e-10);
  }
}

TEST(Inversion, RankDeficiencyNamesMissingOrders) {
  const DensityMatrix rho = fock_one_after_loss(0.5);
  MomentSet m = exact_moments(rho, moment_indices({1}));
  const std::size_t k = m.find({{1, 1}});
  m.indices.erase(m.indices.begin() + static_cast<long>(k));
  m.values.erase(m.values.begin() + static_cast<long>(k));
  m.errors.erase(m.errors.begin() + static_cast<long>(k));
  try {
    operator_from_moments(m, kOne);
    FAIL() << "expected a rank error";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("missing moment orders: 2"), std::string::npos) << e.what();
  }
}

TEST(Estimation, VacuumHasNoSignalMoments) {
  const QuadratureRecord rec = sample_heterodyne(DensityMatrix::vacuum(kOne), amplifier(2.0), 200000, 3);
  const MomentSet m = estimate_moments(rec, 2);
  for (std::size_t i = 0; i < m.indices.size(); ++i) {
    if (total_order(m.indices[i]) == 0) continue;
    EXPECT_LT(std::abs(m.values[i]), 5.0 * m.errors[i] + 1e-12) << i;
  }
}

TEST(Estimation, AttenuatedSinglePhoton) {
  const QuadratureRecord rec = sample_heterodyne(DensityMatrix::basis(kOne, std::vector<int>{1}), amplifier(2.0, 0.414),
                                                 400000, 4);
  const MomentSet m = estimate_moments(rec, moment_indices({1}));
  EXPECT_NEAR(m.at({{1, 1}}).real(), 0.414, 4.0 * m.error_at({{1, 1}}));
  EXPECT_LT(std::abs(m.at({{0, 1}})), 4.0 * m.error_at({{0, 1}}));
}

TEST(Estimation, CoherentAmplitude) {
  const Complex alpha(0.5, 0.2);
  const Space s({ModeLabel("p", 8)});
  Vector psi(8);
  double fact = 1.0;
  for (int n = 0; n < 8; ++n) {
    if (n > 0) fact *= n;
    psi(n) = std::exp(-0.5 * std::norm(alpha)) * std::pow(alpha, n) / std::sqrt(fact);
  }
  const QuadratureRecord rec = sample_heterodyne(DensityMatrix::pure(s, psi), amplifier(2.0), 200000, 5);
  const MomentSet m = estimate_moments(rec, 2);
  const Complex a = m.at({{0, 1}});
  EXPECT_LT(std::abs(a - alpha), 4.0 * m.error_at({{0, 1}}));
  EXPECT_NEAR(m.at({{1, 1}}).real(), std::norm(alpha), 4.0 * m.error_at({{1, 1}}));
}

TEST(Estimation, PropertyHermitianSymmetry) {
  gen::Engine rng(6);
  for (int trial = 0; trial < 4; ++trial) {
    const DensityMatrix rho(kTwo, gen::density(rng, 4));
    const QuadratureRecord rec = sample_heterodyne(rho, amplifier(gen::uniform(rng, 0.0, 3.0)), 20000, 7 + trial);
    const MomentSet m = estimate_moments(rec, moment_indices({1, 1}));
    for (std::size_t i = 0; i < m.indices.size(); ++i) {
      MomentIndex swapped = m.indices[i];
      for (auto& [n, k] : swapped) std::swap(n, k);
      EXPECT_LT(std::abs(m.values[i] - std::conj(m.at(swapped))), 1e-12);
      EXPECT_NEAR(m.errors[i], m.error_at(swapped), 1e-12);
    }
  }
}

TEST(Estimation, ErrorsShrinkLikeInverseRootShotsAndMatchTheSpread) {
  // One jackknife error carries ~16% scatter with 20 blocks, so compare
  // averages over independent records.
  const DensityMatrix rho = fock_one_after_loss(0.6);
  const int records = 30;
  double err_small = 0.0, err_large = 0.0, sum = 0.0, sum2 = 0.0;
  for (int k = 0; k < records; ++k) {
    const MomentSet small =
        estimate_moments(sample_heterodyne(rho, amplifier(2.0), 2000, 100 + k), moment_indices({1}));
    const MomentSet large =
        estimate_moments(sample_heterodyne(rho, amplifier(2.0), 200000, 200 + k), moment_indices({1}));
    err_small += small.error_at({{1, 1}}) / records;
    err_large += large.error_at({{1, 1}}) / records;
    const double v = large.at({{1, 1}}).real();
    sum += v / records;
    sum2 += v * v / records;
  }
  EXPECT_NEAR(err_small / err_large, 10.0, 2.0);
  EXPECT_NEAR(std::sqrt(sum2 - sum * sum) / err_large, 1.0, 0.35);
  EXPECT_NEAR(sum, 0.6, 4.0 * err_large / std::sqrt(records));
}

TEST(Estimation, RejectsIndicesThatAreNotDownwardClosed) {
  const QuadratureRecord rec = sample_heterodyne(DensityMatrix::vacuum(kOne), amplifier(1.0), 1000, 9);
  const std::vector<MomentIndex> gap = {{{0, 0}}, {{1, 1}}};
  EXPECT_THROW(estimate_moments(rec, gap), DomainError);
}

TEST(Estimation, FlagsIllConditionedDeconvolution) {
  const QuadratureRecord rec = sample_heterodyne(DensityMatrix::vacuum(kOne), amplifier(200.0), 200, 10);
  EXPECT_THROW(estimate_moments(rec, 2), NumericalError);
}

TEST(Projection, PureSingleExcitationIsUnchanged) {
  const DensityMatrix early = DensityMatrix::basis(kTwo, std::vector<int>{1, 0});
  const DensityMatrix p = project_subspace(early, single_photon_basis(kTwo, {"E", "L"}));
  EXPECT_LT(gen::max_abs(p.matrix() - early.matrix()), 1e-15);
}

TEST(Projection, MixedStateRenormalizes) {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 0.5;
  m(2, 2) = 0.25;  // |10>
  m(1, 1) = 0.25;  // |01>
  const DensityMatrix p = project_subspace({kTwo, m}, single_photon_basis(kTwo, {"E", "L"}));
  EXPECT_NEAR(p.matrix()(2, 2).real(), 0.5, 1e-15);
  EXPECT_NEAR(p.matrix()(1, 1).real(), 0.5, 1e-15);
  EXPECT_NEAR(p.matrix()(0, 0).real(), 0.0, 1e-15);
  EXPECT_THROW(project_subspace(DensityMatrix::vacuum(kTwo), single_photon_basis(kTwo, {"E", "L"})), NumericalError);
}

TEST(Projection, PropertyIdempotentAndLossInvariant) {
  gen::Engine rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int modes = gen::integer(rng, 2, 3);
    std::vector<ModeLabel> labels;
    std::vector<std::string> names;
    for (int k = 0; k < modes; ++k) {
      names.push_back("b" + std::to_string(k));
      labels.emplace_back(names.back(), gen::integer(rng, 2, 3));
    }
    const Space s(labels);
    const DensityMatrix rho = gen::single_photon_mixture(rng, s);
    const auto basis = single_photon_basis(s, names);
    const DensityMatrix p = project_subspace(rho, basis);
    EXPECT_NEAR(p.matrix().trace().real(), 1.0, 1e-12);
    EXPECT_LT(gen::max_abs(project_subspace(p, basis).matrix() - p.matrix()), 1e-12);
    const double eta = gen::uniform(rng, 0.05, 1.0);
    DensityMatrix lossy = rho;
    for (const auto& n : names) lossy = apply_loss(lossy, n, eta);
    EXPECT_LT(gen::max_abs(project_subspace(lossy, basis).matrix() - p.matrix()), 1e-9);
  }
}

TEST(Reconstruction, SampledLossySinglePhoton) {
  const QuadratureRecord rec =
      sample_heterodyne(DensityMatrix::basis(kOne, std::vector<int>{1}), amplifier(2.0, 0.828), 300000, 12);
  ReconstructionSpec spec;
  spec.dims = {2};
  spec.indices = moment_indices({1});
  Vector one = Vector::Zero(2);
  one(1) = 1.0;
  const TomographyResult r = reconstruct(rec, spec, one);
  EXPECT_NEAR(r.reconstruction.rho.matrix()(1, 1).real(), 0.828, 0.03);
  EXPECT_NEAR(r.fidelity, r.reconstruction.rho.matrix()(1, 1).real(), 1e-12);
}

TEST(Reconstruction, WignerNegativityTracksTheOnePhotonWeight) {
  for (double eta : {0.3, 0.8}) {
    const QuadratureRecord rec =
        sample_heterodyne(DensityMatrix::basis(kOne, std::vector<int>{1}), amplifier(1.0, eta), 200000, 13);
    const Reconstruction r = rho_from_moments(estimate_moments(rec, moment_indices({1})), {2});
    const std::vector<Complex> origin = {0.0};
    const bool negative = wigner(r.rho, origin)[0] < 0.0;
    EXPECT_EQ(negative, r.rho.matrix()(1, 1).real() > 0.5) << eta;
    EXPECT_EQ(negative, eta > 0.5);
  }
}

TEST(Reconstruction, JointQubitPhotonBellState) {
  const Space s({ModeLabel("q", 2), ModeLabel("E", 2), ModeLabel("L", 2)});
  const Vector target = timebin_target(s, kPi / 2, true);
  const QuadratureRecord rec = sample_heterodyne_with_ancilla(DensityMatrix::pure(s, target), "q", amplifier(2.0),
                                                              300000, 14);
  ReconstructionSpec spec;
  spec.dims = {2, 2};
  spec.photon_cap = 1;
  spec.indices = moment_indices({1, 1}, 1);
  spec.joint = true;
  spec.projection = single_photon_basis(s, {"E", "L"});
  const TomographyResult r = reconstruct(rec, spec, target);
  EXPECT_GT(r.fidelity, 0.9);
}

TEST(Bootstrap, ErrorShrinksWithShots) {
  Vector psi = Vector::Zero(4);
  psi(1) = psi(2) = std::sqrt(0.5);
  const DensityMatrix rho = DensityMatrix::pure(kTwo, psi);
  ReconstructionSpec spec;
  spec.dims = {2, 2};
  spec.photon_cap = 1;
  spec.indices = moment_indices({1, 1}, 1);
  spec.projection = single_photon_basis(kTwo, {"E", "L"});
  double previous = 1.0;
  for (std::size_t shots : {2000u, 20000u, 200000u}) {
    const QuadratureRecord rec = sample_heterodyne(rho, amplifier(0.5), shots, 15);
    const BootstrapResult b = bootstrap_fidelity(rec, spec, psi, 100, 16);
    EXPECT_EQ(b.samples.size(), 100u);
    EXPECT_GT(b.std_error, 0.0);
    EXPECT_LT(b.std_error, previous) << shots;
    previous = b.std_error;
  }
  const QuadratureRecord rec = sample_heterodyne(rho, amplifier(0.5), 1000, 15);
  EXPECT_THROW(bootstrap_fidelity(rec, spec, psi, 50, 16), DomainError);
}

TEST(Bootstrap, DeterministicAcrossWorkerCounts) {
  const QuadratureRecord rec = sample_heterodyne(fock_one_after_loss(0.7), amplifier(1.0), 5000, 17);
  ReconstructionSpec spec;
  spec.dims = {2};
  spec.indices = moment_indices({1});
  Vector one = Vector::Zero(2);
  one(1) = 1.0;
  const BootstrapResult a = bootstrap_fidelity(rec, spec, one, 100, 18, 1);
  const BootstrapResult b = bootstrap_fidelity(rec, spec, one, 100, 18, 3);
  EXPECT_EQ(a.samples, b.samples);
}

TEST(Export, DensityMatrixJsonIsRowMajorReIm) {
  gen::Engine rng(19);
  const DensityMatrix rho(kTwo, gen::density(rng, 4));
  const auto j = nlohmann::json::parse(density_matrix_json(rho));
  EXPECT_EQ(j.at("modes"), nlohmann::json({"E", "L"}));
  EXPECT_EQ(j.at("dims"), nlohmann::json({2, 2}));
  EXPECT_DOUBLE_EQ(j.at("re")[1][2].get<double>(), rho.matrix()(1, 2).real());
  EXPECT_DOUBLE_EQ(j.at("im")[1][2].get<double>(), rho.matrix()(1, 2).imag());
  const auto mj = nlohmann::json::parse(moments_json(exact_moments(rho, moment_indices({1, 1}, 1))));
  EXPECT_TRUE(mj.is_object());
}

}  // namespace
}  // namespace qlight
