#include "qbound/errors.h"
#include "qbound/passes.h"
#include "qbound/simulator.h"
#include "support/fixtures.h"
#include "support/oracle.h"

#include <gtest/gtest.h>

using namespace qbound;

namespace {

HybridProgram absorbed(const Circuit& c, const PassResult& r) {
    HybridProgram p = HybridProgram::from_circuit(c);
    EXPECT_TRUE(absorb_pass_result(p, r));
    return p;
}

double worst_gap(const Circuit& c, const HybridProgram& p) {
    double worst = 0;
    for (Index x = 0; x < (Index{1} << c.width); ++x) {
        auto expect = oracle::marginal(oracle::distribution(c, x), p.output_wires);
        worst = std::max(worst, oracle::max_diff(run_hybrid_exact(p, BasisState(c.width, x)), expect));
    }
    return worst;
}

const int kRev[4] = {0, 2, 1, 3};

}  // namespace

TEST(SiFoldMeasurement, SystemMatrixMatchesPrintedTable) {
    PassResult r = si_fold_measurement(fixtures::si_example());
    ASSERT_TRUE(r.changed);
    EXPECT_EQ(r.report.rule, "si-fold-measurement");
    const RealMatrix& m = *r.report.system_matrix;
    const double printed[4][4] = {{0.5, 0, 0.5, 0}, {0, 0.5, 0, 0.5}, {0.5, 0, 0.5, 0.25}, {0, 0.5, 0, 0.25}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) EXPECT_NEAR(m(kRev[i], kRev[j]), printed[i][j], 1e-12) << i << "," << j;
}

TEST(SiFoldMeasurement, OutcomeProbabilitiesMatchPrintedTable) {
    PassResult r = si_fold_measurement(fixtures::si_example());
    ASSERT_TRUE(r.report.outcome_probabilities.has_value());
    const RealMatrix& p = *r.report.outcome_probabilities;
    const double printed[4][4] = {{0.5, 0.5, 0.5, 0.25}, {0.5, 0, 0.5, 0.25}, {0, 0, 0, 0.25}, {0, 0.5, 0, 0.25}};
    for (int mu = 0; mu < 4; ++mu)
        for (int x = 0; x < 4; ++x) EXPECT_NEAR(p(kRev[mu], x), printed[mu][x], 1e-12) << mu << "," << x;
}

TEST(SiFoldMeasurement, RemovesAncillasAndTheirWires) {
    Circuit c = fixtures::si_example();
    PassResult r = si_fold_measurement(c);
    EXPECT_TRUE(r.circuit.gates.empty());
    EXPECT_EQ(r.circuit.num_wires(), 2u);
    EXPECT_EQ(r.dropped_wires, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(r.scale, 1.0);
    ASSERT_TRUE(r.post_stage.has_value());
    EXPECT_EQ(r.post_stage->kind(), StageKind::Stochastic);
    HybridProgram p = absorbed(c, r);
    EXPECT_EQ(p.output_wires, (std::vector<std::size_t>{2, 3}));
    EXPECT_LT(worst_gap(c, p), 1e-12);
    for (std::uint64_t s = 0; s < 5; ++s) {
        auto psi = random_state(4, s);
        psi.amplitudes = fixtures::si_input(psi.amplitudes(0), psi.amplitudes(1), psi.amplitudes(2),
                                            psi.amplitudes(3)).amplitudes;
        psi.amplitudes.normalize();
        auto expect = oracle::marginal(oracle::distribution(c, psi.amplitudes), {2, 3});
        EXPECT_LT(oracle::max_diff(run_hybrid_exact(p, psi), expect), 1e-12);
    }
}

TEST(SiFoldMeasurement, AncillaNotInZeroIsRejected) {
    Circuit c = fixtures::si_example();
    c.preparations[1] = Prep::Free;
    EXPECT_FALSE(si_fold_measurement(c).changed);
}

TEST(SiFoldMeasurement, CoherentBranchIsRejected) {
    Circuit c = fixtures::si_example();
    c.gates.back().branches[1] = {Gate::h(3)};
    c.gates.back().qubits = {3};
    EXPECT_FALSE(si_fold_measurement(c).changed);
}

TEST(SiFoldMeasurement, SystemGateAfterTheGroupBlocks) {
    Circuit c = fixtures::si_example();
    c.add(Gate::h(2));
    EXPECT_FALSE(si_fold_measurement(c).changed);
}

TEST(SiFoldMeasurement, StatevectorCapIsAnError) {
    PassContext ctx;
    ctx.caps.statevector_qubits = 3;
    EXPECT_THROW(si_fold_measurement(fixtures::si_example(), ctx), CapExceeded);
}

TEST(SiFoldMeasurement, ProjectorInsertionGivesScale) {
    // ancilla projected onto |+> keeps half the weight for every input
    Circuit c(2);
    c.prepare(0, Prep::Zero);
    Matrix plus = 0.5 * (linalg::identity(2) + linalg::pauli_x());
    c.add(Gate::op({0}, {plus}));
    c.add(Gate::controlled_block({1}, {0}, {linalg::identity(2), linalg::rx(kPi / 2)}));
    c.measure_all();
    c.add(Gate::classically_controlled({0}, {{}, {Gate::x(1)}}));
    PassResult r = si_fold_measurement(c);
    ASSERT_TRUE(r.changed);
    EXPECT_NEAR(r.scale, 0.5, 1e-12);
    HybridProgram p = absorbed(c, r);
    for (Index x = 0; x < 4; ++x) {
        auto expect = oracle::marginal(oracle::distribution(c, x), p.output_wires);
        EXPECT_LT(oracle::max_diff(run_hybrid_exact(p, BasisState(2, x)), expect), 1e-12);
    }
}

TEST(SiFoldPreparation, FoldsIntoPremap) {
    Circuit c = fixtures::si_example();
    c.add(Gate::h(2)).add(Gate::cx(2, 3));
    PassContext ctx;
    ctx.basis_inputs = true;
    PassResult r = si_fold_preparation(c, ctx);
    ASSERT_TRUE(r.changed);
    EXPECT_EQ(r.report.rule, "si-fold-preparation");
    ASSERT_TRUE(r.premap.has_value());
    EXPECT_EQ(r.premap->support(), (std::vector<std::size_t>{2, 3}));
    EXPECT_EQ(r.circuit.gates.size(), 2u);
    EXPECT_LT(worst_gap(c, absorbed(c, r)), 1e-12);
}

TEST(SiFoldPreparation, FreeSystemNeedsBasisInputs) {
    Circuit c = fixtures::si_example();
    c.add(Gate::h(2));
    EXPECT_FALSE(si_fold_preparation(c).changed);
}
