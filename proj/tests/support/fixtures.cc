#include "support/fixtures.h"

#include "qbound/io.h"
#include "qbound/linalg.h"

#include <cmath>

namespace fixtures {

using qbound::Circuit;
using qbound::Gate;
using qbound::Matrix;
using qbound::Prep;
namespace la = qbound::linalg;

namespace {

Matrix zx_exponential(double theta) {
    Matrix zx = la::kron_lsb({la::pauli_z(), la::pauli_x()});
    return std::cos(theta) * la::identity(4) + qbound::Complex(0, std::sin(theta)) * zx;
}

Matrix u3(double a, double b, double c) { return la::rz(a) * la::rx(b) * la::rz(c); }

}  // namespace

Circuit example1() {
    Circuit c(4);
    c.add(Gate::h(0));
    c.add(Gate::cx(0, 1));
    c.add(Gate::z(2));
    c.add(Gate::cx(0, 2));
    c.add(Gate::cx(0, 3));
    c.measure_all();
    return c;
}

Circuit qft4() {
    Circuit c(4);
    for (std::size_t q = 0; q < 4; ++q) c.prepare(q, Prep::Zero);
    for (std::size_t t = 0; t < 4; ++t) {
        c.add(Gate::h(t));
        for (std::size_t k = t + 1; k < 4; ++k) {
            c.add(Gate::cr(k, t, static_cast<int>(k - t + 1)));
        }
    }
    c.measure_all();
    return c;
}

Circuit example3() {
    Circuit c(2);
    c.add(Gate::cx(0, 1));
    c.add(Gate::h(0));
    c.add(Gate::h(1));
    c.measure_all();
    return c;
}

Circuit example2() {
    Circuit c(2);
    c.prepare(1, Prep::Zero);
    c.add(Gate::matrix({1}, u3(0.7, 1.1, -0.4)));
    c.add(Gate::controlled_block({1}, {0}, {la::identity(2), u3(0.3, -0.8, 1.9)}));
    c.add(Gate::matrix({1}, u3(-1.2, 0.5, 0.6)));
    c.measure_all();
    return c;
}

Circuit si_example() {
    Circuit c(4);
    c.prepare(0, Prep::Zero);
    c.prepare(1, Prep::Zero);
    c.add(Gate::h(1));
    c.add(Gate::toffoli(1, 2, 0));
    c.add(Gate::controlled_block({3}, {1}, {la::identity(2), la::rx(qbound::kPi / 2)}));
    c.measure_all();
    c.add(Gate::classically_controlled({1}, {{}, {Gate::x(2)}}));
    c.add(Gate::classically_controlled({0}, {{}, {Gate::cx(2, 3)}}));
    return c;
}

Circuit gate_cut() {
    Circuit c(3);
    c.prepare(1, Prep::Zero);
    c.add(Gate::h(0));
    // e^{iπ/4 Z⊗X}·rz(-π/2)⊗rx(π/2) is a CX up to a global phase.
    c.add(Gate::matrix({0, 1}, zx_exponential(qbound::kPi / 4)));
    c.add(Gate::rz(0, -qbound::kPi / 2));
    c.add(Gate::rx(1, qbound::kPi / 2));
    c.add(Gate::h(0));
    c.add(Gate::controlled_block({2}, {1}, {la::identity(2), la::rx(qbound::kPi / 2)}));
    c.measure_all();
    c.add(Gate::classically_controlled({1}, {{}, {Gate::x(2)}}));
    return c;
}

Circuit wire_cut() {
    Circuit c(2);
    c.prepare(0, Prep::Zero);
    c.add(Gate::h(1));
    c.add(Gate::ry(0, 0.9));
    c.add(Gate::cx(0, 1));
    c.add(Gate::controlled_block({1}, {0}, {la::identity(2), la::rx(qbound::kPi / 2)}));
    c.measure_all();
    c.add(Gate::classically_controlled({0}, {{}, {Gate::x(1)}}));
    return c;
}

qbound::StateVector si_input(qbound::Complex alpha, qbound::Complex beta, qbound::Complex gamma,
                             qbound::Complex delta) {
    qbound::StateVector s;
    s.width = 4;
    s.amplitudes = qbound::Vector::Zero(16);
    // (x1, x2) -> index x1·4 + x2·8
    s.amplitudes(0) = alpha;
    s.amplitudes(8) = beta;
    s.amplitudes(4) = gamma;
    s.amplitudes(12) = delta;
    return s;
}

std::vector<double> reverse_two_bits(const std::vector<double>& v) {
    std::vector<double> out = v;
    std::swap(out[1], out[2]);
    return out;
}

std::string fixture_path(const std::string& name) { return std::string(QBOUND_FIXTURES_DIR) + "/" + name + ".json"; }

Circuit load_fixture(const std::string& name) { return qbound::parse_circuit_file(fixture_path(name)); }

}  // namespace fixtures
