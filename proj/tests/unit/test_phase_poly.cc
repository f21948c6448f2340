#include "qbound/errors.h"
#include "qbound/phase_poly.h"
#include "support/oracle.h"
#include "support/random_circuits.h"

#include <gtest/gtest.h>

#include <random>

using namespace qbound;

namespace {

Matrix diag_perm(const PhasePolyRep& r) { return phase_poly_to_unitary(r); }

}  // namespace

TEST(GatePhasePoly, PrintedTableEntries) {
    auto x = *gate_phase_poly(Gate::x(0));
    EXPECT_EQ(x.perm, (std::vector<Index>{1, 0}));
    EXPECT_TRUE(x.phase_is_zero());

    auto z = *gate_phase_poly(Gate::z(0));
    EXPECT_TRUE(z.perm_is_identity());
    EXPECT_NEAR(z.phase[1], kPi, 1e-15);

    auto t = *gate_phase_poly(Gate::t(0));
    EXPECT_NEAR(t.phase[1], kPi / 4, 1e-15);

    auto cx = *gate_phase_poly(Gate::cx(0, 1));
    // f(x1, x2) = (x1, x1 ^ x2)
    for (Index v = 0; v < 4; ++v) {
        EXPECT_EQ(cx.perm[v], v ^ (bit_of(v, 0) ? 2u : 0u));
    }
}

TEST(GatePhasePoly, RzCarriesTheExactPhaseTable) {
    double theta = 0.83;
    auto r = *gate_phase_poly(Gate::rz(0, theta));
    EXPECT_NEAR(linalg::phase_distance(r.phase[0], theta / 2), 0.0, 1e-14);
    EXPECT_NEAR(linalg::phase_distance(r.phase[1], -theta / 2), 0.0, 1e-14);
}

TEST(GatePhasePoly, YMatchesUpToGlobalPhase) {
    auto y = *gate_phase_poly(Gate::y(0));
    EXPECT_LT(linalg::distance_up_to_global_phase(phase_poly_to_unitary(y), oracle::local_matrix(Gate::y(0))), 1e-14);
}

TEST(GatePhasePoly, CoherentGatesHaveNone) {
    EXPECT_FALSE(gate_phase_poly(Gate::h(0)).has_value());
    EXPECT_FALSE(gate_phase_poly(Gate::rx(0, 0.4)).has_value());
    EXPECT_FALSE(gate_phase_poly(Gate::ry(0, 0.4)).has_value());
}

TEST(GatePhasePoly, MatrixGatesAreDetected) {
    Matrix m = linalg::pauli_x() * linalg::phase(0.3);
    auto r = gate_phase_poly(Gate::matrix({0}, m));
    ASSERT_TRUE(r.has_value());
    EXPECT_LT(linalg::max_abs_diff(phase_poly_to_unitary(*r), m), 1e-14);
    EXPECT_FALSE(gate_phase_poly(Gate::matrix({0}, linalg::hadamard())).has_value());
}

TEST(PhasePolyRep, MakeRejectsNonBijection) {
    EXPECT_THROW(PhasePolyRep::make(1, {0.0, 0.0}, {0, 0}), std::invalid_argument);
    auto r = PhasePolyRep::make(1, {-0.5, 7.0}, {1, 0});
    EXPECT_GE(r.phase[0], 0.0);
    EXPECT_LT(r.phase[1], kTwoPi);
}

TEST(Compose, MatchesMatrixProduct) {
    auto a = *gate_phase_poly(Gate::cx(0, 1));
    auto b = embed_phase_poly(*gate_phase_poly(Gate::t(0)), std::vector<std::size_t>{1},
                              std::vector<std::size_t>{0, 1});
    auto ab = compose_phase_poly(a, b);
    EXPECT_LT(linalg::max_abs_diff(diag_perm(ab), diag_perm(b) * diag_perm(a)), 1e-14);
}

TEST(Embed, ExtendsWithIdentity) {
    auto t = *gate_phase_poly(Gate::t(0));
    std::vector<std::size_t> ops = {2};
    std::vector<std::size_t> sup = {0, 2};
    auto e = embed_phase_poly(t, ops, sup);
    EXPECT_EQ(e.width, 2u);
    EXPECT_NEAR(e.phase[2], kPi / 4, 1e-15);
    EXPECT_NEAR(e.phase[1], 0.0, 1e-15);
}

TEST(Segment, AgreesWithOracleOnRandomIncoherentCircuits) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        testgen::RandomCircuitOptions opt;
        opt.incoherent_bias = 1.0;
        opt.fixed_prep_rate = 0.0;
        Circuit c = testgen::random_circuit(seed, opt);
        std::vector<std::size_t> sup(c.width);
        for (std::size_t q = 0; q < c.width; ++q) sup[q] = q;
        auto rep = segment_to_phase_poly(c.gates, sup);
        ASSERT_TRUE(rep.has_value()) << "seed " << seed;
        EXPECT_LT(linalg::distance_up_to_global_phase(phase_poly_to_unitary(*rep), oracle::circuit_unitary(c)), 1e-12)
            << "seed " << seed;
    }
}

TEST(Segment, StopsAtCoherentGate) {
    std::vector<Gate> gates = {Gate::cx(0, 1), Gate::h(1)};
    std::vector<std::size_t> sup = {0, 1};
    EXPECT_FALSE(segment_to_phase_poly(gates, sup).has_value());
}

TEST(Segment, CapIsEnforced) {
    std::vector<Gate> gates = {Gate::x(0)};
    std::vector<std::size_t> sup = {0, 1, 2, 3, 4};
    Caps caps;
    caps.table_qubits = 4;
    EXPECT_THROW(segment_to_phase_poly(gates, sup, caps), CapExceeded);
}

TEST(IncoherentCheck, RecoversRepresentation) {
    Matrix m = oracle::local_matrix(Gate::toffoli(0, 1, 2)) * oracle::full_matrix(Gate::s(1), 3);
    auto r = incoherent_check(m);
    ASSERT_TRUE(r.has_value());
    EXPECT_LT(linalg::max_abs_diff(phase_poly_to_unitary(*r), m), 1e-14);
    EXPECT_FALSE(incoherent_check(linalg::hadamard()).has_value());
    Matrix bad = Matrix::Ones(2, 2);
    EXPECT_THROW(incoherent_check(bad), std::invalid_argument);
}

TEST(PhasePolyToUnitary, CapAtTwelveQubits) {
    EXPECT_THROW(phase_poly_to_unitary(PhasePolyRep::identity(13)), CapExceeded);
}
