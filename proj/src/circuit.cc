#include "qbound/circuit.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qbound {

namespace {

constexpr double kUnitaryTol = 1e-10;

struct KindInfo {
    GateKind kind;
    std::string_view name;
    // Fixed operand count, or 0 when variable.
    std::size_t arity;
};

constexpr std::array<KindInfo, 19> kKinds{{
    {GateKind::X, "X", 1},
    {GateKind::Y, "Y", 1},
    {GateKind::Z, "Z", 1},
    {GateKind::H, "H", 1},
    {GateKind::S, "S", 1},
    {GateKind::T, "T", 1},
    {GateKind::RX, "RX", 1},
    {GateKind::RY, "RY", 1},
    {GateKind::RZ, "RZ", 1},
    {GateKind::Phase, "PHASE", 1},
    {GateKind::CX, "CX", 2},
    {GateKind::CZ, "CZ", 2},
    {GateKind::CR, "CR", 2},
    {GateKind::Swap, "SWAP", 2},
    {GateKind::Toffoli, "TOFFOLI", 3},
    {GateKind::Matrix, "MATRIX", 0},
    {GateKind::ControlledBlock, "CONTROLLED_BLOCK", 0},
    {GateKind::ClassicallyControlled, "CLASSICALLY_CONTROLLED", 0},
    {GateKind::Operator, "OPERATOR", 0},
}};

const KindInfo& info(GateKind kind) {
    for (const KindInfo& k : kKinds) {
        if (k.kind == kind) {
            return k;
        }
    }
    throw std::logic_error("unknown gate kind");
}

Gate simple(GateKind kind, std::vector<std::size_t> qubits) {
    Gate g;
    g.kind = kind;
    g.qubits = std::move(qubits);
    return g;
}

Gate rotation(GateKind kind, std::size_t q, double theta) {
    Gate g = simple(kind, {q});
    g.angle = theta;
    return g;
}

bool matrices_equal(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].rows() != b[i].rows() || a[i].cols() != b[i].cols() || a[i] != b[i]) {
            return false;
        }
    }
    return true;
}

}  // namespace

BasisState::BasisState(std::size_t width_, Index index_) : width(width_), index(index_) {
    if (width > 62 || index >= (Index{1} << width)) {
        throw std::invalid_argument("basis index " + std::to_string(index) + " out of range for " +
                                    std::to_string(width) + " qubits");
    }
}

Index basis_index(std::span<const int> bits) {
    if (bits.size() > 62) {
        throw std::invalid_argument("basis_index: more than 62 bits");
    }
    Index out = 0;
    for (std::size_t k = 0; k < bits.size(); ++k) {
        if (bits[k] != 0 && bits[k] != 1) {
            throw std::invalid_argument("basis_index: bits must be 0 or 1");
        }
        out |= static_cast<Index>(bits[k]) << k;
    }
    return out;
}

std::vector<int> basis_bits(Index index, std::size_t width) {
    std::vector<int> bits(width);
    for (std::size_t k = 0; k < width; ++k) {
        bits[k] = bit_of(index, k);
    }
    return bits;
}

std::string_view kind_name(GateKind kind) { return info(kind).name; }

std::optional<GateKind> kind_from_name(std::string_view name) {
    for (const KindInfo& k : kKinds) {
        if (k.name == name) {
            return k.kind;
        }
    }
    return std::nullopt;
}

Gate Gate::x(std::size_t q) { return simple(GateKind::X, {q}); }
Gate Gate::y(std::size_t q) { return simple(GateKind::Y, {q}); }
Gate Gate::z(std::size_t q) { return simple(GateKind::Z, {q}); }
Gate Gate::h(std::size_t q) { return simple(GateKind::H, {q}); }
Gate Gate::s(std::size_t q) { return simple(GateKind::S, {q}); }
Gate Gate::t(std::size_t q) { return simple(GateKind::T, {q}); }
Gate Gate::rx(std::size_t q, double theta) { return rotation(GateKind::RX, q, theta); }
Gate Gate::ry(std::size_t q, double theta) { return rotation(GateKind::RY, q, theta); }
Gate Gate::rz(std::size_t q, double theta) { return rotation(GateKind::RZ, q, theta); }
Gate Gate::phase(std::size_t q, double theta) { return rotation(GateKind::Phase, q, theta); }
Gate Gate::cx(std::size_t control, std::size_t target) { return simple(GateKind::CX, {control, target}); }
Gate Gate::cz(std::size_t a, std::size_t b) { return simple(GateKind::CZ, {a, b}); }

Gate Gate::cr(std::size_t control, std::size_t target, int m) {
    Gate g = simple(GateKind::CR, {control, target});
    g.order = m;
    return g;
}

Gate Gate::swap(std::size_t a, std::size_t b) { return simple(GateKind::Swap, {a, b}); }

Gate Gate::toffoli(std::size_t c1, std::size_t c2, std::size_t target) {
    return simple(GateKind::Toffoli, {c1, c2, target});
}

Gate Gate::matrix(std::vector<std::size_t> qubits, qbound::Matrix u) {
    Gate g = simple(GateKind::Matrix, std::move(qubits));
    g.payload.push_back(std::move(u));
    return g;
}

Gate Gate::controlled_block(std::vector<std::size_t> controls, std::vector<std::size_t> targets,
                            std::vector<qbound::Matrix> blocks) {
    Gate g = simple(GateKind::ControlledBlock, std::move(controls));
    g.qubits.insert(g.qubits.end(), targets.begin(), targets.end());
    g.payload = std::move(blocks);
    return g;
}

Gate Gate::classically_controlled(std::vector<std::size_t> wires, std::vector<std::vector<Gate>> branches) {
    Gate g;
    g.kind = GateKind::ClassicallyControlled;
    g.wires = std::move(wires);
    std::set<std::size_t> support;
    for (const auto& branch : branches) {
        for (const Gate& inner : branch) {
            support.insert(inner.qubits.begin(), inner.qubits.end());
        }
    }
    g.qubits.assign(support.begin(), support.end());
    g.branches = std::move(branches);
    return g;
}

Gate Gate::op(std::vector<std::size_t> qubits, std::vector<qbound::Matrix> operators, std::vector<double> weights) {
    Gate g = simple(GateKind::Operator, std::move(qubits));
    g.payload = std::move(operators);
    g.weights = std::move(weights);
    return g;
}

std::size_t Gate::num_controls() const {
    if (kind != GateKind::ControlledBlock || payload.empty()) {
        return 0;
    }
    return log2_exact(payload.size());
}

bool Gate::acts_on(std::size_t q) const { return std::find(qubits.begin(), qubits.end(), q) != qubits.end(); }

bool Gate::is_unitary_kind() const {
    return kind != GateKind::ClassicallyControlled && kind != GateKind::Operator;
}

bool Gate::operator==(const Gate& other) const {
    return kind == other.kind && qubits == other.qubits && wires == other.wires && angle == other.angle &&
           order == other.order && matrices_equal(payload, other.payload) && weights == other.weights &&
           branches == other.branches;
}

qbound::Matrix gate_matrix(const Gate& g) {
    using namespace linalg;
    switch (g.kind) {
        case GateKind::X:
            return pauli_x();
        case GateKind::Y:
            return pauli_y();
        case GateKind::Z:
            return pauli_z();
        case GateKind::H:
            return hadamard();
        case GateKind::S:
            return phase(kPi / 2);
        case GateKind::T:
            return phase(kPi / 4);
        case GateKind::RX:
            return rx(g.angle);
        case GateKind::RY:
            return ry(g.angle);
        case GateKind::RZ:
            return rz(g.angle);
        case GateKind::Phase:
            return phase(g.angle);
        case GateKind::CX: {
            qbound::Matrix m = qbound::Matrix::Zero(4, 4);
            for (Index x = 0; x < 4; ++x) {
                m(static_cast<Eigen::Index>(x ^ ((x & 1U) << 1)), static_cast<Eigen::Index>(x)) = 1;
            }
            return m;
        }
        case GateKind::CZ: {
            qbound::Matrix m = identity(4);
            m(3, 3) = -1;
            return m;
        }
        case GateKind::CR: {
            qbound::Matrix m = identity(4);
            m(3, 3) = std::polar(1.0, kTwoPi / std::ldexp(1.0, g.order));
            return m;
        }
        case GateKind::Swap: {
            qbound::Matrix m = qbound::Matrix::Zero(4, 4);
            m(0, 0) = m(3, 3) = m(1, 2) = m(2, 1) = 1;
            return m;
        }
        case GateKind::Toffoli: {
            qbound::Matrix m = qbound::Matrix::Zero(8, 8);
            for (Index x = 0; x < 8; ++x) {
                const Index y = ((x & 3U) == 3U) ? (x ^ 4U) : x;
                m(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) = 1;
            }
            return m;
        }
        case GateKind::Matrix:
            if (g.payload.size() != 1) {
                throw std::invalid_argument("MATRIX gate needs exactly one payload matrix");
            }
            return g.payload.front();
        case GateKind::ControlledBlock: {
            const std::size_t c = g.num_controls();
            const Eigen::Index ctrl_dim = static_cast<Eigen::Index>(g.payload.size());
            const Eigen::Index tgt_dim = g.payload.front().rows();
            qbound::Matrix m = qbound::Matrix::Zero(ctrl_dim * tgt_dim, ctrl_dim * tgt_dim);
            // Local index = control value + 2^c * target index.
            for (Eigen::Index i = 0; i < ctrl_dim; ++i) {
                const qbound::Matrix& u = g.payload[static_cast<std::size_t>(i)];
                for (Eigen::Index r = 0; r < tgt_dim; ++r) {
                    for (Eigen::Index col = 0; col < tgt_dim; ++col) {
                        m(i + (r << c), i + (col << c)) = u(r, col);
                    }
                }
            }
            return m;
        }
        case GateKind::Operator:
            if (g.payload.size() == 1 && (g.weights.empty() || g.weights.front() == 1.0)) {
                return g.payload.front();
            }
            throw std::invalid_argument("weighted OPERATOR sum has no single matrix");
        case GateKind::ClassicallyControlled:
            throw std::invalid_argument("classically controlled gate has no single matrix");
    }
    throw std::logic_error("unhandled gate kind");
}

Circuit::Circuit(std::size_t width_) : width(width_), preparations(width_, Prep::Free) {}

Circuit& Circuit::add(Gate g) {
    gates.push_back(std::move(g));
    return *this;
}

Circuit& Circuit::measure(std::size_t qubit, std::size_t wire) {
    measurements.push_back({qubit, wire});
    return *this;
}

Circuit& Circuit::measure_all() {
    measurements.clear();
    for (std::size_t q = 0; q < width; ++q) {
        measurements.push_back({q, q});
    }
    return *this;
}

Circuit& Circuit::prepare(std::size_t qubit, Prep p) {
    if (qubit >= preparations.size()) {
        throw std::invalid_argument("prepare: qubit out of range");
    }
    preparations[qubit] = p;
    return *this;
}

std::optional<std::size_t> Circuit::wire_of(std::size_t qubit) const {
    for (const Measurement& m : measurements) {
        if (m.qubit == qubit) {
            return m.wire;
        }
    }
    return std::nullopt;
}

std::optional<std::size_t> Circuit::qubit_of_wire(std::size_t wire) const {
    for (const Measurement& m : measurements) {
        if (m.wire == wire) {
            return m.qubit;
        }
    }
    return std::nullopt;
}

std::size_t Circuit::count_multi_qubit_gates() const {
    return static_cast<std::size_t>(
        std::count_if(gates.begin(), gates.end(), [](const Gate& g) { return g.qubits.size() > 1; }));
}

std::string Violation::to_string() const {
    std::ostringstream out;
    out << rule;
    if (gate) {
        out << " at gate " << *gate;
    }
    if (!detail.empty()) {
        out << ": " << detail;
    }
    return out.str();
}

namespace {

class Validator {
  public:
    explicit Validator(const Circuit& c) : c_(c) {}

    std::vector<Violation> run() {
        if (c_.preparations.size() != c_.width) {
            add(std::nullopt, "preparation-count", "expected one preparation per qubit");
        }
        for (std::size_t i = 0; i < c_.gates.size(); ++i) {
            check_gate(i, c_.gates[i], false);
        }
        check_measurements();
        check_classical_order();
        return std::move(out_);
    }

  private:
    void add(std::optional<std::size_t> gate, std::string rule, std::string detail = {}) {
        out_.push_back({gate, std::move(rule), std::move(detail)});
    }

    void check_payload_unitary(std::size_t i, const Matrix& m, std::size_t dim) {
        if (static_cast<std::size_t>(m.rows()) != dim || static_cast<std::size_t>(m.cols()) != dim) {
            add(i, "payload-shape", "expected " + std::to_string(dim) + "x" + std::to_string(dim));
            return;
        }
        const double defect = linalg::unitarity_defect(m);
        if (!(defect <= kUnitaryTol)) {
            std::ostringstream msg;
            msg << "|U^dagger U - 1| = " << defect;
            add(i, "non-unitary", msg.str());
        }
    }

    void check_gate(std::size_t i, const Gate& g, bool nested) {
        const KindInfo& k = info(g.kind);
        if (k.arity != 0 && g.qubits.size() != k.arity) {
            add(i, "arity", std::string(k.name) + " takes " + std::to_string(k.arity) + " operands");
        }
        std::set<std::size_t> seen;
        for (std::size_t q : g.qubits) {
            if (q >= c_.width) {
                add(i, "operand-out-of-range", "qubit " + std::to_string(q));
            }
            if (!seen.insert(q).second) {
                add(i, "duplicate-operand", "qubit " + std::to_string(q));
            }
        }
        if (g.kind != GateKind::ClassicallyControlled && !g.wires.empty()) {
            add(i, "unexpected-wires");
        }
        switch (g.kind) {
            case GateKind::RX:
            case GateKind::RY:
            case GateKind::RZ:
            case GateKind::Phase:
                if (!std::isfinite(g.angle)) {
                    add(i, "bad-angle");
                }
                break;
            case GateKind::CR:
                if (g.order < 1 || g.order > 62) {
                    add(i, "bad-order", "CR order must be in [1, 62]");
                }
                break;
            case GateKind::Matrix:
                if (g.qubits.empty() || g.payload.size() != 1) {
                    add(i, "payload-shape", "MATRIX needs operands and one matrix");
                } else if (g.qubits.size() < 20) {
                    check_payload_unitary(i, g.payload.front(), std::size_t{1} << g.qubits.size());
                }
                break;
            case GateKind::ControlledBlock: {
                const std::size_t n = g.payload.size();
                if (n < 2 || (n & (n - 1)) != 0) {
                    add(i, "payload-shape", "CONTROLLED_BLOCK needs 2^controls blocks");
                    break;
                }
                const std::size_t c = log2_exact(n);
                if (c >= g.qubits.size()) {
                    add(i, "payload-shape", "CONTROLLED_BLOCK needs at least one target");
                    break;
                }
                const std::size_t dim = std::size_t{1} << (g.qubits.size() - c);
                for (const Matrix& u : g.payload) {
                    check_payload_unitary(i, u, dim);
                }
                break;
            }
            case GateKind::Operator: {
                if (g.qubits.empty() || g.payload.empty()) {
                    add(i, "payload-shape", "OPERATOR needs operands and operators");
                    break;
                }
                const auto dim = static_cast<Eigen::Index>(std::size_t{1} << g.qubits.size());
                for (const Matrix& m : g.payload) {
                    if (m.rows() != dim || m.cols() != dim) {
                        add(i, "payload-shape", "operator dimension mismatch");
                    }
                }
                if (!g.weights.empty() && g.weights.size() != g.payload.size()) {
                    add(i, "payload-shape", "one weight per operator");
                }
                break;
            }
            case GateKind::ClassicallyControlled: {
                if (nested) {
                    add(i, "nested-classical-control");
                    break;
                }
                if (g.wires.empty() || g.wires.size() > 20 || g.branches.size() != (std::size_t{1} << g.wires.size())) {
                    add(i, "branch-count", "need 2^wires branches");
                }
                std::set<std::size_t> wire_seen;
                for (std::size_t w : g.wires) {
                    if (!wire_seen.insert(w).second) {
                        add(i, "duplicate-wire-operand", "wire " + std::to_string(w));
                    }
                    if (!c_.qubit_of_wire(w)) {
                        add(i, "unmeasured-control-wire", "wire " + std::to_string(w));
                    }
                }
                std::set<std::size_t> support;
                for (const auto& branch : g.branches) {
                    for (const Gate& inner : branch) {
                        if (!inner.is_unitary_kind()) {
                            add(i, "non-unitary-branch", std::string(kind_name(inner.kind)));
                        }
                        check_gate(i, inner, true);
                        support.insert(inner.qubits.begin(), inner.qubits.end());
                    }
                }
                if (std::vector<std::size_t>(support.begin(), support.end()) != g.qubits) {
                    add(i, "branch-support", "operands must be the union of branch qubits");
                }
                break;
            }
            default:
                break;
        }
    }

    void check_measurements() {
        std::set<std::size_t> qubits;
        std::set<std::size_t> wires;
        for (const Measurement& m : c_.measurements) {
            if (m.qubit >= c_.width) {
                add(std::nullopt, "measurement-out-of-range", "qubit " + std::to_string(m.qubit));
            }
            if (!qubits.insert(m.qubit).second) {
                add(std::nullopt, "duplicate-measurement", "qubit " + std::to_string(m.qubit));
            }
            if (!wires.insert(m.wire).second) {
                add(std::nullopt, "duplicate-wire", "wire " + std::to_string(m.wire));
            }
        }
        for (std::size_t w : wires) {
            if (w >= c_.measurements.size()) {
                add(std::nullopt, "wire-gap", "wires must be numbered 0..m-1; got " + std::to_string(w));
                break;
            }
        }
    }

    // A classically controlled gate reads qubits that must stay idle from then on.
    void check_classical_order() {
        for (std::size_t i = 0; i < c_.gates.size(); ++i) {
            const Gate& g = c_.gates[i];
            if (g.kind != GateKind::ClassicallyControlled) {
                continue;
            }
            for (std::size_t w : g.wires) {
                const auto q = c_.qubit_of_wire(w);
                if (!q) {
                    continue;
                }
                if (g.acts_on(*q)) {
                    add(i, "classical-control-order",
                        "gate acts on the qubit it is controlled by (wire " + std::to_string(w) + ")");
                }
                for (std::size_t j = i + 1; j < c_.gates.size(); ++j) {
                    if (c_.gates[j].acts_on(*q)) {
                        add(j, "classical-control-order",
                            "qubit " + std::to_string(*q) + " used after its measurement was read at gate " +
                                std::to_string(i));
                    }
                }
            }
        }
    }

    const Circuit& c_;
    std::vector<Violation> out_;
};

}  // namespace

std::vector<Violation> validate_circuit(const Circuit& circuit) { return Validator(circuit).run(); }

}  // namespace qbound
