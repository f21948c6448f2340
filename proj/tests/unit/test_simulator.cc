#include "qbound/cutting.h"
#include "qbound/errors.h"
#include "qbound/simulator.h"
#include "support/fixtures.h"
#include "support/oracle.h"
#include "support/random_circuits.h"

#include <gtest/gtest.h>

#include <cmath>

using namespace qbound;

namespace {

Matrix pure(const Vector& v) { return v * v.adjoint(); }

}  // namespace

TEST(Statevector, EmptyCircuitKeepsBasisState) {
    Circuit c(3);
    auto s = simulate_statevector(c, BasisState(3, 5));
    EXPECT_NEAR(std::abs(s.amplitudes(5) - Complex(1.0)), 0.0, 1e-15);
    EXPECT_NEAR(s.norm(), 1.0, 1e-15);
}

TEST(Statevector, HadamardOnZero) {
    Circuit c(1);
    c.add(Gate::h(0));
    auto s = simulate_statevector(c, BasisState(1, 0));
    EXPECT_NEAR(s.amplitudes(0).real(), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(s.amplitudes(1).real(), 1 / std::sqrt(2.0), 1e-15);
}

TEST(Statevector, QftOnZeroIsUniform) {
    auto s = simulate_statevector(fixtures::qft4(), BasisState(4, 0));
    for (int i = 0; i < 16; ++i) EXPECT_NEAR(std::abs(s.amplitudes(i)), 0.25, 1e-14);
}

TEST(Statevector, RejectsClassicalControlAndWidth) {
    EXPECT_THROW(simulate_statevector(fixtures::si_example(), BasisState(4, 0)), std::invalid_argument);
    Caps caps;
    caps.statevector_qubits = 3;
    EXPECT_THROW(simulate_statevector(Circuit(4), BasisState(4, 0), caps), CapExceeded);
}

TEST(Statevector, MatchesOracleUnitaryOnRandomCircuits) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        testgen::RandomCircuitOptions opt;
        opt.fixed_prep_rate = 0.0;
        Circuit c = testgen::random_circuit(seed, opt);
        auto psi = random_state(c.width, seed + 100);
        auto s = simulate_statevector(c, psi);
        Vector expect = oracle::circuit_unitary(c) * psi.amplitudes;
        EXPECT_LT((s.amplitudes - expect).cwiseAbs().maxCoeff(), 1e-12) << "seed " << seed;
    }
}

TEST(Distribution, HadamardMeasured) {
    Circuit c(1);
    c.add(Gate::h(0)).measure_all();
    auto d = measurement_distribution(c, BasisState(1, 0));
    EXPECT_NEAR(d[0], 0.5, 1e-15);
    EXPECT_NEAR(d[1], 0.5, 1e-15);
}

TEST(Distribution, ExampleOneIsGhzLike) {
    auto d = measurement_distribution(fixtures::example1(), BasisState(4, 0));
    EXPECT_NEAR(d[0], 0.5, 1e-14);
    EXPECT_NEAR(d[0b1111], 0.5, 1e-14);
}

TEST(Distribution, SiExampleColumnZero) {
    auto d = measurement_distribution(fixtures::si_example(), BasisState(4, 0));
    std::vector<std::size_t> keep = {2, 3};
    auto m = fixtures::reverse_two_bits(marginalize(d, 4, keep));
    std::vector<double> expect = {0.5, 0, 0.5, 0};
    EXPECT_LT(oracle::max_diff(m, expect), 1e-12);
}

TEST(Distribution, ClassicalControlMatchesOracle) {
    Circuit c = fixtures::si_example();
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto psi = random_state(4, seed);
        auto d = measurement_distribution(c, psi);
        EXPECT_LT(oracle::max_diff(d, oracle::distribution(c, psi.amplitudes)), 1e-12);
        double sum = 0;
        for (double p : d) sum += p;
        EXPECT_NEAR(sum, 1.0, 1e-12);
    }
}

TEST(Distribution, FixedPreparationsOverrideInputBits) {
    Circuit c(2);
    c.prepare(0, Prep::One).measure_all();
    auto d = measurement_distribution(c, BasisState(2, 0b10));
    EXPECT_NEAR(d[0b11], 1.0, 1e-15);
    EXPECT_EQ(resolve_preparations(c, 0b10), 0b11u);
}

TEST(OperatorTerms, Projectors) {
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 1;
    Matrix plus = 0.5 * (linalg::identity(2) + linalg::pauli_z());
    Matrix minus = 0.5 * (linalg::identity(2) - linalg::pauli_z());
    Circuit a(1), b(1);
    a.add(Gate::op({0}, {plus}));
    b.add(Gate::op({0}, {minus}));
    Matrix ra = apply_operator_terms(a, rho);
    EXPECT_LT(linalg::max_abs_diff(ra, rho), 1e-15);
    EXPECT_LT(apply_operator_terms(b, rho).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(OperatorTerms, HorizontalTermThreeOnPlusPlus) {
    auto terms = horizontal_cut_terms(kPi / 4, linalg::pauli_z(), linalg::pauli_z());
    Circuit c(2);
    c.add(Gate::op({0}, {terms[2].first})).add(Gate::op({1}, {terms[2].second}));
    Vector pp = Vector::Constant(4, Complex(0.5));
    Matrix out = apply_operator_terms(c, pure(pp));
    EXPECT_NEAR(out.trace().real(), 0.5, 1e-14);
}

TEST(OperatorTerms, DensityCap) {
    Caps caps;
    caps.density_qubits = 2;
    EXPECT_THROW(apply_operator_terms(Circuit(3), Matrix::Identity(8, 8) / 8.0, caps), CapExceeded);
}

TEST(Expectation, TextbookValues) {
    auto zero = StateVector::basis(1, 0);
    EXPECT_NEAR(expectation_value(zero, Observable::product({linalg::pauli_z()})), 1.0, 1e-15);
    StateVector plus;
    plus.width = 1;
    plus.amplitudes = Vector::Constant(2, Complex(1 / std::sqrt(2.0)));
    EXPECT_NEAR(expectation_value(plus, Observable::product({linalg::pauli_x()})), 1.0, 1e-15);
}

TEST(Expectation, ZzAfterXxRotation) {
    ExponentialForm f{0.3, linalg::pauli_x(), linalg::pauli_x()};
    Circuit c(2);
    c.add(Gate::matrix({0, 1}, exponential_matrix(f)));
    auto s = simulate_statevector(c, BasisState(2, 0));
    Observable z1 = Observable::product({linalg::pauli_z(), linalg::identity(2)});
    EXPECT_NEAR(expectation_value(s, z1), std::cos(0.6), 1e-14);
    EXPECT_NEAR(expectation_value(pure(s.amplitudes), z1), std::cos(0.6), 1e-14);
    // Z⊗Z commutes with X⊗X
    Observable zz = Observable::product({linalg::pauli_z(), linalg::pauli_z()});
    EXPECT_NEAR(expectation_value(s, zz), 1.0, 1e-14);
}

TEST(Expectation, WidthMismatchThrows) {
    EXPECT_THROW(expectation_value(StateVector::basis(2, 0), Observable::product({linalg::pauli_z()})),
                 std::invalid_argument);
}

TEST(Hybrid, EmptyCircuitIdentityStagesGivePointMass) {
    Circuit c(2);
    c.measure_all();
    HybridProgram p = HybridProgram::from_circuit(c);
    p.input_premap = ClassicalStage::deterministic(2, {1, 2, 3, 0});
    p.post_stages.push_back(ClassicalStage::identity(2));
    auto d = run_hybrid_exact(p, BasisState(2, 1));
    EXPECT_NEAR(d[2], 1.0, 1e-15);
}

TEST(Hybrid, MatchesOracleWithStochasticStages) {
    Circuit c(2);
    c.add(Gate::h(0)).add(Gate::cx(0, 1)).measure_all();
    HybridProgram p = HybridProgram::from_circuit(c);
    RealMatrix m(2, 2);
    m << 0.9, 0.3, 0.1, 0.7;
    p.post_stages.push_back(ClassicalStage::stochastic_on(2, {1}, m));
    p.input_premap = ClassicalStage::deterministic_on(2, {0}, {1, 0});
    for (Index x = 0; x < 4; ++x) {
        EXPECT_LT(oracle::max_diff(run_hybrid_exact(p, BasisState(2, x)), oracle::hybrid_distribution(p, x)),
                  1e-14);
    }
}

TEST(Hybrid, StateInputRequiresPremapOnFixedQubits) {
    Circuit c(2);
    c.measure_all();
    HybridProgram p = HybridProgram::from_circuit(c);
    p.input_premap = ClassicalStage::deterministic_on(2, {0}, {1, 0});
    EXPECT_THROW(run_hybrid_exact(p, random_state(2, 1)), InputError);
}

TEST(Sampling, SeedDeterminismAndTotals) {
    HybridProgram p = HybridProgram::from_circuit(fixtures::example1());
    auto a = sample_hybrid(p, BasisState(4, 0), 5000, 9);
    auto b = sample_hybrid(p, BasisState(4, 0), 5000, 9);
    EXPECT_EQ(a, b);
    std::uint64_t total = 0;
    for (auto v : a) total += v;
    EXPECT_EQ(total, 5000u);
    EXPECT_EQ(a[0] + a[0b1111], 5000u);
}

TEST(Sampling, RejectsScaledPrograms) {
    Circuit c(1);
    c.measure_all();
    HybridProgram p = HybridProgram::from_circuit(c);
    p.scale = 0.5;
    EXPECT_THROW(sample_hybrid(p, BasisState(1, 0), 10, 1), std::invalid_argument);
}

TEST(Kraus, AmplitudeDampingBecomesStochastic) {
    double g = 0.3;
    Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
    k0(0, 0) = 1;
    k0(1, 1) = std::sqrt(1 - g);
    k1(0, 1) = std::sqrt(g);
    std::string warn;
    auto s = kraus_to_stochastic(KrausChannel{{k0, k1}}, &warn);
    RealMatrix m = s.local_dense();
    EXPECT_NEAR(m(0, 1), g, 1e-15);
    EXPECT_NEAR(m(1, 1), 1 - g, 1e-15);
    EXPECT_TRUE(warn.empty());
}

TEST(Kraus, IncompleteChannelThrowsAndCoherentWarns) {
    Matrix half = 0.5 * linalg::identity(2);
    EXPECT_THROW(kraus_to_stochastic(KrausChannel{{half}}), std::invalid_argument);
    std::string warn;
    kraus_to_stochastic(KrausChannel{{linalg::hadamard()}}, &warn);
    EXPECT_FALSE(warn.empty());
}

TEST(Marginalize, SumsOverDroppedWires) {
    std::vector<double> d = {0.1, 0.2, 0.3, 0.4};
    std::vector<std::size_t> keep = {1};
    auto m = marginalize(d, 2, keep);
    EXPECT_NEAR(m[0], 0.3, 1e-15);
    EXPECT_NEAR(m[1], 0.7, 1e-15);
}

TEST(Equivalence, DetectsDifference) {
    Circuit a(1), b(1);
    a.measure_all();
    b.add(Gate::x(0)).measure_all();
    std::vector<BasisState> in = {BasisState(1, 0)};
    auto r = equivalence_check(HybridProgram::from_circuit(a), HybridProgram::from_circuit(b), in, 1e-9);
    EXPECT_FALSE(r.passed);
    EXPECT_NEAR(r.max_deviation, 1.0, 1e-15);
    auto same = equivalence_check(HybridProgram::from_circuit(a), HybridProgram::from_circuit(a), in, 1e-9);
    EXPECT_TRUE(same.passed);
}

TEST(RandomStates, NormalizedAndReproducible) {
    auto a = random_state(3, 42);
    auto b = random_state(3, 42);
    EXPECT_NEAR(a.norm(), 1.0, 1e-14);
    EXPECT_EQ(a.amplitudes, b.amplitudes);
    Matrix rho = random_density(2, 7);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-14);
    EXPECT_TRUE(linalg::is_hermitian(rho, 1e-14));
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-14);
}

TEST(ApplyLocal, MatchesFullMatrix) {
    Gate g = Gate::toffoli(2, 0, 1);
    auto psi = random_state(3, 3);
    Vector v = psi.amplitudes;
    apply_local(v, gate_matrix(g), g.qubits);
    EXPECT_LT((v - oracle::full_matrix(g, 3) * psi.amplitudes).cwiseAbs().maxCoeff(), 1e-14);
}
