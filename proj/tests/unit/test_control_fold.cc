#include "qbound/passes.h"
#include "qbound/simulator.h"
#include "support/fixtures.h"
#include "support/oracle.h"
#include "support/random_circuits.h"

#include <gtest/gtest.h>

using namespace qbound;

namespace {

HybridProgram absorbed(const Circuit& c, const PassResult& r) {
    HybridProgram p = HybridProgram::from_circuit(c);
    EXPECT_TRUE(absorb_pass_result(p, r));
    return p;
}

double worst_gap(const Circuit& c, const HybridProgram& p, std::size_t states) {
    double worst = 0;
    for (Index x = 0; x < (Index{1} << c.width); ++x) {
        auto expect = oracle::marginal(oracle::distribution(c, x), p.output_wires);
        worst = std::max(worst, oracle::max_diff(run_hybrid_exact(p, BasisState(c.width, x)), expect));
    }
    for (std::size_t s = 0; s < states; ++s) {
        auto psi = random_state(c.width, 900 + s);
        auto expect = oracle::marginal(oracle::distribution(c, psi.amplitudes), p.output_wires);
        worst = std::max(worst, oracle::max_diff(run_hybrid_exact(p, psi), expect));
    }
    return worst;
}

}  // namespace

TEST(FoldPreparation, QftOnZeroLosesAllControlledPhases) {
    Circuit c = fixtures::qft4();
    PassResult r = fold_control_preparation(c);
    ASSERT_TRUE(r.changed);
    EXPECT_EQ(r.circuit.count_multi_qubit_gates(), 0u);
    EXPECT_EQ(r.report.multi_qubit_after, 0u);
    auto d = run_hybrid_exact(absorbed(c, r), BasisState(4, 0));
    for (double p : d) EXPECT_NEAR(p, 1.0 / 16, 1e-12);
}

TEST(FoldPreparation, OneControlledToffoliBecomesCx) {
    Circuit c(3);
    c.prepare(0, Prep::One);
    c.add(Gate::toffoli(0, 1, 2)).measure_all();
    PassResult r = fold_control_preparation(c);
    ASSERT_EQ(r.circuit.gates.size(), 1u);
    EXPECT_EQ(r.circuit.gates[0], Gate::cx(1, 2));
    EXPECT_LT(worst_gap(c, absorbed(c, r), 4), 1e-12);
}

TEST(FoldPreparation, ZeroControlRemovesGate) {
    Circuit c(2);
    c.prepare(0, Prep::Zero);
    c.add(Gate::controlled_block({0}, {1}, {linalg::identity(2), linalg::hadamard()})).measure_all();
    PassResult r = fold_control_preparation(c);
    EXPECT_TRUE(r.circuit.gates.empty());
}

TEST(FoldPreparation, ControlTouchedEarlierIsNotConstant) {
    Circuit c(2);
    c.prepare(0, Prep::One);
    c.add(Gate::h(0)).add(Gate::cx(0, 1)).measure_all();
    EXPECT_FALSE(fold_control_preparation(c).changed);
}

TEST(FoldPreparation, DiagonalGatesKeepControlConstant) {
    Circuit c(2);
    c.prepare(0, Prep::One);
    c.add(Gate::cx(0, 1)).add(Gate::cx(0, 1)).measure_all();
    PassResult r = fold_control_preparation(c);
    EXPECT_EQ(r.circuit.count_multi_qubit_gates(), 0u);
    EXPECT_LT(worst_gap(c, absorbed(c, r), 4), 1e-12);
}

TEST(FoldPreparation, PremapConstantBitsCount) {
    Circuit c(2);
    c.prepare(0, Prep::Zero);
    c.add(Gate::cx(0, 1)).measure_all();
    ClassicalStage pre = ClassicalStage::deterministic_on(2, {0}, {1, 1});
    PassContext ctx;
    ctx.premap = &pre;
    PassResult r = fold_control_preparation(c, ctx);
    ASSERT_EQ(r.circuit.gates.size(), 1u);
    EXPECT_EQ(r.circuit.gates[0], Gate::x(1));
}

TEST(FoldMeasurement, ControlMeasuredAfterwardsBecomesClassical) {
    Circuit c(2);
    c.add(Gate::h(0)).add(Gate::cx(0, 1)).measure_all();
    PassResult r = fold_control_measurement(c);
    ASSERT_TRUE(r.changed);
    EXPECT_EQ(r.circuit.count_multi_qubit_gates(), 0u);
    ASSERT_EQ(r.circuit.gates.size(), 2u);
    EXPECT_EQ(r.circuit.gates[1].kind, GateKind::ClassicallyControlled);
    EXPECT_EQ(r.circuit.gates[1].wires, (std::vector<std::size_t>{0}));
    EXPECT_TRUE(validate_circuit(r.circuit).empty());
    EXPECT_LT(worst_gap(c, absorbed(c, r), 4), 1e-12);
}

TEST(FoldMeasurement, CzPicksWhicheverSideIsFree) {
    Circuit c(2);
    c.add(Gate::h(0)).add(Gate::h(1)).add(Gate::cz(0, 1)).add(Gate::h(1)).measure_all();
    PassResult r = fold_control_measurement(c);
    ASSERT_TRUE(r.changed);
    EXPECT_EQ(r.circuit.count_multi_qubit_gates(), 0u);
    EXPECT_LT(worst_gap(c, absorbed(c, r), 4), 1e-12);
}

TEST(FoldMeasurement, UnmeasuredControlStays) {
    Circuit c(2);
    c.add(Gate::h(0)).add(Gate::cx(0, 1)).measure(1, 0);
    EXPECT_FALSE(fold_control_measurement(c).changed);
}

TEST(FoldMeasurement, ControlUsedLaterStays) {
    Circuit c(2);
    c.add(Gate::cx(0, 1)).add(Gate::h(0)).measure_all();
    EXPECT_FALSE(fold_control_measurement(c).changed);
}

TEST(Fold, RandomCircuitsKeepDistributions) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        Circuit c = testgen::random_circuit(seed);
        for (bool meas : {true, false}) {
            PassResult r = meas ? fold_control_measurement(c) : fold_control_preparation(c);
            EXPECT_LE(r.circuit.count_multi_qubit_gates(), c.count_multi_qubit_gates());
            EXPECT_TRUE(validate_circuit(r.circuit).empty()) << "seed " << seed;
            EXPECT_LT(worst_gap(c, absorbed(c, r), 2), 1e-10) << "seed " << seed << (meas ? " meas" : " prep");
        }
    }
}
