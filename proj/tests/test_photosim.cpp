#include <cmath>
#include <map>
#include <string>
#include <numbers>

#include <gtest/gtest.h>

#include <pathoam/clements.hpp>
#include <pathoam/hybrid.hpp>
#include <pathoam/photosim.hpp>

#include "oracles.hpp"

using namespace pathoam;
using std::numbers::pi;

namespace {

HybridNetlist empty_netlist(int n) {
  HybridNetlist net;
  net.n = n;
  net.dim = 4 * n;
  net.original_dim = net.dim;
  return net;
}

}  // namespace

TEST(ElementMatrix, SwapExchangesZeroAndTwo) {
  const SimBasis basis = SimBasis::hybrid(encode(1));
  CMatrix expected = CMatrix::Zero(4, 4);
  expected(0, 2) = expected(2, 0) = expected(1, 1) = expected(3, 3) = 1.0;
  EXPECT_TRUE(element_matrix(SwapGate{0}, basis) == expected);
}

TEST(ElementMatrix, IdentityCalibrationIsIdentity) {
  const SimBasis basis = SimBasis::hybrid(encode(2));
  const ObsParams id = synthesize_obs({0.0, 0.0}, {0.0, 0.0}, 2, 1);
  EXPECT_TRUE(element_matrix(id, basis) == CMatrix::Identity(8, 8));
}

TEST(ElementMatrix, ObsActiveOnlyAtPlusL) {
  const SimBasis basis = SimBasis::hybrid(encode(1));
  const ObsParams p = synthesize_obs({pi / 4, 0.0}, {0.0, 0.0}, 0, 1);
  const CMatrix m = element_matrix(p, basis);
  const double c = std::cos(pi / 4);
  for (int r = 0; r < 2; ++r)
    for (int col = 0; col < 2; ++col) EXPECT_NEAR(std::abs(m(r, col) - oracle::r_entry(pi / 4, 0.0, r, col)), 0.0, 1e-15);
  EXPECT_NEAR(m(0, 0).real(), c, 1e-15);
  EXPECT_NEAR(m(0, 1).real(), -c, 1e-15);
  EXPECT_LT((m.bottomRightCorner(2, 2) - CMatrix::Identity(2, 2)).norm(), 1e-15);
  EXPECT_TRUE(m.topRightCorner(2, 2).isZero(0.0));
  EXPECT_TRUE(m.bottomLeftCorner(2, 2).isZero(0.0));
}

TEST(ElementMatrix, PhaseShifterIsDiagonal) {
  const SimBasis basis = SimBasis::hybrid(encode(1, 2));
  const CMatrix m = element_matrix(OamPhaseShifter{1, 0.3, 0.1}, basis);
  EXPECT_TRUE(oracle::is_diagonal(m, 0.0));
  EXPECT_NEAR(std::arg(m(1, 1)), 0.3 + 0.4, 1e-15);
  EXPECT_NEAR(std::arg(m(3, 3)), 0.3 - 0.4, 1e-15);
  EXPECT_EQ(m(0, 0), Complex(1.0));
}

TEST(ElementMatrix, UnitaryForCompiledElements) {
  const HybridNetlist net = compile(decompose(haar_random_unitary(12, 3)));
  const SimBasis basis = simulation_basis(net);
  for (const auto& e : net.elements) EXPECT_LT(unitarity_defect(element_matrix(e, basis)), 1e-12 * 12);
}

TEST(ElementMatrix, SwapSquaredIsIdentity) {
  const SimBasis basis = SimBasis::hybrid(encode(2, 4));
  for (int p = 0; p < 4; ++p) {
    const CMatrix s = element_matrix(SwapGate{p, 4}, basis);
    EXPECT_TRUE((s * s).isIdentity(0.0));
  }
}

TEST(ElementMatrix, MissingLabelIsBasisError) {
  const SimBasis basis = SimBasis::hybrid(encode(1));
  EXPECT_THROW(element_matrix(SwapGate{0, 2}, basis), BasisError);
  EXPECT_THROW(element_matrix(OamPhaseShifter{5}, basis), BasisError);
  EXPECT_THROW(element_matrix(ObsParams{1, 2}, basis), BasisError);
  const SimBasis lopsided({{0, 1}, {1, 1}, {1, -1}});
  EXPECT_THROW(element_matrix(ObsParams{0, 1}, lopsided), BasisError);
}

TEST(SimBasis, DuplicateLabelsRejected) {
  EXPECT_THROW(SimBasis({{0, 1}, {0, 1}}), BasisError);
  EXPECT_THROW(SimBasis::hybrid(encode(1)).index_of({0, 3}), BasisError);
}

TEST(Simulate, EmptyNetlistIsIdentity) {
  EXPECT_TRUE(simulate_netlist(empty_netlist(2)).matrix() == CMatrix::Identity(8, 8));
}

TEST(Simulate, SwapThenInverseIsIdentity) {
  HybridNetlist net = empty_netlist(1);
  net.elements = {SwapGate{0}, SwapGate{0, 1, true}};
  EXPECT_TRUE(simulate_netlist(net).matrix() == CMatrix::Identity(4, 4));
}

TEST(Simulate, UnbalancedSwapRejected) {
  HybridNetlist net = empty_netlist(1);
  net.elements = {SwapGate{0}};
  EXPECT_THROW(simulate_netlist(net), ValidationError);
}

TEST(Simulate, DimEightMatchesInput) {
  const UnitaryMatrix u = haar_random_unitary(8, 77);
  EXPECT_LT(frobenius_distance(simulate_netlist(compile(decompose(u))).matrix(), u.matrix()), 1e-7);
}

TEST(Simulate, AssociativeSplits) {
  const HybridNetlist net = compile(decompose(haar_random_unitary(8, 6)));
  const SimBasis basis = simulation_basis(net);
  const CMatrix full = element_product(net.elements, basis);
  for (std::size_t cut = 0; cut <= net.elements.size(); cut += 7) {
    const std::vector<HybridElement> head(net.elements.begin(), net.elements.begin() + static_cast<long>(cut));
    const std::vector<HybridElement> tail(net.elements.begin() + static_cast<long>(cut), net.elements.end());
    const CMatrix split = element_product(tail, basis) * element_product(head, basis);
    EXPECT_LT(frobenius_distance(split, full), 1e-12 * 8) << "cut " << cut;
  }
}

TEST(Simulate, StatePropagationMatchesProduct) {
  for (Index dim : {4, 8})
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const HybridNetlist net = compile(decompose(haar_random_unitary(dim, seed)));
      const CMatrix product = simulate_netlist(net).matrix();
      const CMatrix columns = propagate_columns(net);
      for (Index j = 0; j < dim; ++j)
        EXPECT_LT((product.col(j) - columns.col(j)).norm(), 1e-12) << "dim " << dim << " col " << j;
    }
}

TEST(Simulate, PropagateStateChecksDimension) {
  EXPECT_THROW(propagate_state(empty_netlist(1), CVector::Zero(3)), DimensionError);
}

TEST(Verify, SelfReferenceFidelityOne) {
  const HybridNetlist net = compile(decompose(haar_random_unitary(8, 13)));
  const VerificationReport r = verify(net, simulate_netlist(net));
  EXPECT_NEAR(r.fidelity, 1.0, 1e-9);
  EXPECT_LT(r.frobenius_error, 1e-12 * 8);
  EXPECT_TRUE(r.laws_pass());
}

TEST(Verify, DimTwelveConformanceRows) {
  const UnitaryMatrix u = haar_random_unitary(12, 1);
  const VerificationReport r = verify(compile(decompose(u)), u);
  std::map<std::string, long long> actual;
  for (const auto& row : r.conformance) {
    EXPECT_TRUE(row.pass) << row.law;
    actual[row.law.substr(0, row.law.find(' '))] = row.actual;
  }
  EXPECT_EQ(actual["obs_count"], 48);
  EXPECT_EQ(actual["swap_count"], 36);
  EXPECT_EQ(actual["optical_depth"], 18);
  EXPECT_EQ(actual["mzi_reduction"], 18);
  EXPECT_EQ(r.counts["obs_count"], 48);
  EXPECT_EQ(r.dim, 12);
}

TEST(Verify, CorruptedThetaIsReportedNotThrown) {
  const UnitaryMatrix u = haar_random_unitary(8, 4);
  HybridNetlist net = compile(decompose(u));
  for (auto& e : net.elements)
    if (auto* obs = std::get_if<ObsParams>(&e)) {
      obs->alpha2 += 0.3;
      break;
    }
  VerificationReport r;
  ASSERT_NO_THROW(r = verify(net, u));
  EXPECT_LT(r.fidelity, 1.0 - 1e-6);
  EXPECT_GT(r.frobenius_error, 1e-3);
  EXPECT_TRUE(r.laws_pass());
}

TEST(Verify, PaddedReferenceAccepted) {
  const UnitaryMatrix u = haar_random_unitary(6, 2);
  HybridNetlist net = compile(decompose(pad_unitary(u, 8)));
  net.original_dim = 6;
  const VerificationReport r = verify(net, u);
  EXPECT_LT(r.frobenius_error, 1e-7 * 8);
  EXPECT_EQ(r.dim, 8);
  EXPECT_THROW(verify(net, haar_random_unitary(5, 2)), DimensionError);
}

TEST(Verify, OamReportIncludesUnitLaws) {
  const UnitaryMatrix u = haar_random_unitary(8, 5);
  const VerificationReport r = verify(compile_oam(u), u);
  EXPECT_LT(r.frobenius_error, 1e-7 * 8);
  EXPECT_TRUE(r.laws_pass());
  EXPECT_EQ(r.conformance.size(), 4u + 6u);
  EXPECT_EQ(r.counts["sorter_count"], 6);
}

TEST(Verify, ReportJsonKeys) {
  const UnitaryMatrix u = haar_random_unitary(4, 5);
  const json j = to_json(verify(compile(decompose(u)), u));
  for (const char* key : {"frobenius_error", "fidelity", "counts", "conformance", "dim"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_TRUE(j["conformance"][0].contains("law"));
  EXPECT_TRUE(j["conformance"][0]["pass"].get<bool>());
}

TEST(OamSimulate, PortBasis) {
  const SimBasis b = oam_port_basis(3);
  ASSERT_EQ(b.dim(), 8);
  EXPECT_EQ(b[0], (ModeLabel{0, 1}));
  EXPECT_EQ(b[7], (ModeLabel{0, 8}));
}
