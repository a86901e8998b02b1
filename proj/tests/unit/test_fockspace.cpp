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

#include <gtest/gtest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "qlight/fockspace.hpp"

namespace qlight {
namespace {

const Space kQubit({ModeLabel("q", 2)});

void expect_physical(const DensityMatrix& rho) {
  const Matrix& m = rho.matrix();
  EXPECT_NEAR(m.trace().real(), 1.0, 1e-9);
  EXPECT_LT(gen::max_abs(m - m.adjoint()), 1e-9);
  EXPECT_GT(min_eigenvalue(m), -1e-9);
}

TEST(Space, IndexAndOccupationsAreInverse) {
  const Space s({ModeLabel("a", 2), ModeLabel("b", 3), ModeLabel("c", 4)});
  EXPECT_EQ(s.dimension(), 24);
  for (int i = 0; i < s.dimension(); ++i) EXPECT_EQ(s.index(s.occupations(i)), i);
  // First mode is the most significant.
  const std::vector<int> occ = {1, 0, 0};
  EXPECT_EQ(s.index(occ), 12);
}

TEST(Space, RejectsDuplicatesAndUnknownLabels) {
  EXPECT_THROW(Space({ModeLabel("a", 2), ModeLabel("a", 3)}), DomainError);
  EXPECT_THROW(kQubit.concat(kQubit), DomainError);
  EXPECT_THROW(kQubit.index_of("z"), DomainError);
  EXPECT_THROW(ModeLabel("x", 1), DomainError);
}

TEST(Tensor, ProductOfPureStatesIsPure) {
  const Space r({ModeLabel("r", 2)});
  const std::vector<int> g = {0};
  const DensityMatrix rho = tensor(DensityMatrix::basis(kQubit, g), DensityMatrix::basis(r, g));
  EXPECT_EQ(rho.dimension(), 4);
  EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-15);
  EXPECT_NEAR((rho.matrix() * rho.matrix()).trace().real(), 1.0, 1e-15);
}

TEST(Tensor, IdentitiesMultiply) {
  const Space b({ModeLabel("b", 3)});
  const Operator id = tensor(Operator::identity(kQubit), Operator::identity(b));
  EXPECT_LT(gen::max_abs(id.matrix() - Matrix::Identity(6, 6)), 1e-15);
}

TEST(PartialTrace, BellStateGivesMaximallyMixedQubit) {
  const Space s({ModeLabel("q", 2), ModeLabel("bin", 2)});
  Vector psi = Vector::Zero(4);
  psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
  const DensityMatrix red = partial_trace(DensityMatrix::pure(s, psi), {"q"});
  Eigen::SelfAdjointEigenSolver<Matrix> es(red.matrix());
  EXPECT_NEAR(es.eigenvalues()(0), 0.5, 1e-12);
  EXPECT_NEAR(es.eigenvalues()(1), 0.5, 1e-12);
  EXPECT_THROW(partial_trace(DensityMatrix::pure(s, psi), {"nope"}), DomainError);
}

TEST(PartialTrace, PropertyInvertsTensorOnRandomProducts) {
  gen::Engine rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Space sa({ModeLabel("a", gen::integer(rng, 2, 4))});
    const Space sb({ModeLabel("b", gen::integer(rng, 2, 4)), ModeLabel("c", gen::integer(rng, 2, 3))});
    const DensityMatrix ra(sa, gen::density(rng, sa.dimension()));
    const DensityMatrix rb(sb, gen::density(rng, sb.dimension()));
    const DensityMatrix joint = tensor(ra, rb);
    expect_physical(joint);
    EXPECT_LT(gen::max_abs(partial_trace(joint, {"a"}).matrix() - ra.matrix()), 1e-12);
    const DensityMatrix back = partial_trace(joint, {"b", "c"});
    EXPECT_LT(gen::max_abs(back.matrix() - rb.matrix()), 1e-12);
    expect_physical(back);
  }
}

TEST(PartialTrace, KeptModesStayInTheirOriginalOrder) {
  gen::Engine rng(3);
  const Space sa({ModeLabel("a", 2)});
  const Space sb({ModeLabel("b", 3)});
  const DensityMatrix ra(sa, gen::density(rng, 2));
  const DensityMatrix rb(sb, gen::density(rng, 3));
  const DensityMatrix joint = tensor(ra, rb);
  const DensityMatrix kept = partial_trace(joint, {"b", "a"});
  EXPECT_EQ(kept.space().mode(0).name, "a");
  EXPECT_LT(gen::max_abs(kept.matrix() - joint.matrix()), 1e-12);
}

TEST(Loss, FockOneAtQuantumEfficiency) {
  const Space p({ModeLabel("p", 2)});
  const std::vector<int> one = {1};
  const DensityMatrix out = apply_loss(DensityMatrix::basis(p, one), "p", 0.828);
  EXPECT_NEAR(out.matrix()(0, 0).real(), 0.172, 1e-12);
  EXPECT_NEAR(out.matrix()(1, 1).real(), 0.828, 1e-12);
}

TEST(Loss, SuperpositionCoherenceMatchesBeamsplitterOracle) {
  const Space p({ModeLabel("p", 2)});
  Vector psi(2);
  psi << 1.0, 1.0;
  const DensityMatrix rho = DensityMatrix::pure(p, psi);
  const DensityMatrix out = apply_loss(rho, "p", 0.5);
  EXPECT_NEAR(std::abs(out.matrix()(0, 1)), 0.5 * std::sqrt(0.5), 1e-12);
  EXPECT_LT(gen::max_abs(out.matrix() - oracle::beamsplitter_loss(rho.matrix(), 0.5)), 1e-12);
}

TEST(Loss, PropertyAgreesWithBeamsplitterOracle) {
  gen::Engine rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = gen::integer(rng, 2, 5);
    const Space p({ModeLabel("p", d)});
    const DensityMatrix rho(p, gen::density(rng, d));
    const double eta = gen::uniform(rng, 0.0, 1.0);
    const DensityMatrix out = apply_loss(rho, "p", eta);
    EXPECT_LT(gen::max_abs(out.matrix() - oracle::beamsplitter_loss(rho.matrix(), eta)), 1e-10) << "d=" << d;
    expect_physical(out);
  }
}

TEST(Loss, PropertyCompositionAndPhotonNumber) {
  gen::Engine rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const Space s = gen::space(rng, 2, 4);
    const DensityMatrix rho(s, gen::density(rng, s.dimension()));
    const double e1 = gen::uniform(rng, 0.0, 1.0);
    const double e2 = gen::uniform(rng, 0.0, 1.0);
    const DensityMatrix twice = apply_loss(apply_loss(rho, "m1", e1), "m1", e2);
    const DensityMatrix once = apply_loss(rho, "m1", e1 * e2);
    EXPECT_LT(gen::max_abs(twice.matrix() - once.matrix()), 1e-12);
    EXPECT_NEAR(once.mean_occupation("m1"), e1 * e2 * rho.mean_occupation("m1"), 1e-12);
    EXPECT_NEAR(once.mean_occupation("m0"), rho.mean_occupation("m0"), 1e-12);
    expect_physical(once);
  }
}

TEST(Loss, UnitTransmissivityIsIdentityAndRangeIsChecked) {
  gen::Engine rng(9);
  const Space s = gen::space(rng, 2, 3);
  const DensityMatrix rho(s, gen::density(rng, s.dimension()));
  EXPECT_LT(gen::max_abs(apply_loss(rho, "m0", 1.0).matrix() - rho.matrix()), 1e-15);
  EXPECT_THROW(apply_loss(rho, "m0", 1.5), DomainError);
  EXPECT_THROW(apply_loss(rho, "m0", -0.1), DomainError);
}

TEST(Fidelity, PureOverlapAndGlobalPhase) {
  gen::Engine rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const Space s = gen::space(rng, 2, 3);
    const DensityMatrix rho(s, gen::density(rng, s.dimension()));
    const Vector psi = gen::pure_state(rng, s.dimension());
    const double f = fidelity(rho, psi);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
    const Complex phase = std::polar(1.0, gen::uniform(rng, 0.0, kTwoPi));
    EXPECT_NEAR(fidelity(rho, phase * psi), f, 1e-14);
    EXPECT_NEAR(fidelity(DensityMatrix::pure(s, psi), psi), 1.0, 1e-12);
  }
  EXPECT_THROW(fidelity(DensityMatrix::vacuum(kQubit), Vector::Ones(3) / std::sqrt(3.0)), DomainError);
}

TEST(Wigner, KnownValuesAtTheOrigin) {
  const Space p({ModeLabel("p", 3)});
  const std::vector<int> zero = {0}, one = {1};
  const std::vector<Complex> origin = {0.0};
  EXPECT_NEAR(wigner(DensityMatrix::basis(p, zero), origin)[0], 1.0 / kPi, 1e-12);
  EXPECT_NEAR(wigner(DensityMatrix::basis(p, one), origin)[0], -1.0 / kPi, 1e-12);
  const Space two({ModeLabel("a", 2), ModeLabel("b", 2)});
  EXPECT_THROW(wigner(DensityMatrix::vacuum(two), origin), DomainError);
}

TEST(Wigner, IntegratesToOne) {
  gen::Engine rng(17);
  const Space p({ModeLabel("p", 3)});
  const DensityMatrix rho(p, gen::density(rng, 3));
  const double h = 0.05;
  const int n = 241;  // covers [-6, 6]
  std::vector<Complex> grid;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) grid.emplace_back(-6.0 + h * i, -6.0 + h * j);
  }
  const std::vector<double> w = wigner(rho, grid);
  double total = 0.0;
  for (double v : w) total += v * h * h;
  EXPECT_NEAR(total, 1.0, 1e-3);
}

TEST(Wigner, PropertyAgreesWithDisplacedParityOracle) {
  gen::Engine rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = gen::integer(rng, 2, 4);
    const Space p({ModeLabel("p", d)});
    const DensityMatrix rho(p, gen::density(rng, d));
    std::vector<Complex> points;
    for (int k = 0; k < 5; ++k) points.emplace_back(gen::uniform(rng, -2.0, 2.0), gen::uniform(rng, -2.0, 2.0));
    const std::vector<double> w = wigner(rho, points);
    for (std::size_t k = 0; k < points.size(); ++k) {
      EXPECT_NEAR(w[k], oracle::wigner_parity(rho.matrix(), points[k]), 1e-9) << "z=" << points[k];
    }
  }
}

TEST(DensityMatrix, ValidatesInputs) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 0.5;
  EXPECT_THROW(DensityMatrix(kQubit, m), DomainError);  // trace
  m(1, 1) = 0.5;
  m(0, 1) = 0.3;
  EXPECT_THROW(DensityMatrix(kQubit, m), DomainError);  // not Hermitian
  m(0, 1) = 0.0;
  m(0, 0) = 1.5;
  m(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix(kQubit, m), DomainError);  // negative
  EXPECT_THROW(DensityMatrix(kQubit, Matrix::Identity(3, 3) / 3.0), DomainError);
}

TEST(Operator, NumberMatchesLadderProduct) {
  const Space s({ModeLabel("a", 3), ModeLabel("b", 4)});
  const Operator a = Operator::destroy(s, "b");
  const Operator n = Operator::number(s, "b");
  EXPECT_LT(gen::max_abs((a.adjoint() * a).matrix() - n.matrix()), 1e-14);
}

}  // namespace
}  // namespace qlight
