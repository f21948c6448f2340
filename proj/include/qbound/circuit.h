#pragma once

#include "qbound/linalg.h"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qbound {

// Computational basis state |index> on `width` qubits.
struct BasisState {
    std::size_t width = 0;
    Index index = 0;

    BasisState() = default;
    // Throws std::invalid_argument unless index < 2^width.
    BasisState(std::size_t width, Index index);

    int bit(std::size_t qubit) const { return bit_of(index, qubit); }
    bool operator==(const BasisState&) const = default;
};

// Σ_k bits[k]·2^k, i.e. the first bit is the least significant digit.
// Throws std::invalid_argument for more than 62 bits or entries other than 0/1.
Index basis_index(std::span<const int> bits);

// Inverse of basis_index for a fixed width.
std::vector<int> basis_bits(Index index, std::size_t width);

enum class GateKind {
    X,
    Y,
    Z,
    H,
    S,
    T,
    RX,
    RY,
    RZ,
    Phase,
    CX,
    CZ,
    CR,
    Swap,
    Toffoli,
    Matrix,
    ControlledBlock,
    ClassicallyControlled,
    // Weighted operator insertion ρ -> Σ_i w_i K_i ρ K_i†; produced by circuit cutting.
    Operator,
};

std::string_view kind_name(GateKind kind);
std::optional<GateKind> kind_from_name(std::string_view name);

struct Gate {
    GateKind kind = GateKind::X;
    // Operand qubits. Local matrices index these little-endian: qubits[0] is bit 0.
    // ControlledBlock: controls first, then targets. ClassicallyControlled: the
    // sorted union of the qubits its branches act on.
    std::vector<std::size_t> qubits;
    // Classical operands (ClassicallyControlled only). Outcome bit j is wires[j].
    std::vector<std::size_t> wires;
    // RX, RY, RZ, Phase: radians.
    double angle = 0.0;
    // CR: controlled diag(1, e^{2πi/2^m}).
    int order = 0;
    // Matrix: one unitary. ControlledBlock: 2^controls target unitaries.
    // Operator: the operators K_i.
    std::vector<qbound::Matrix> payload;
    // Operator: per-operator weights (empty means all 1).
    std::vector<double> weights;
    // ClassicallyControlled: gate list applied for each outcome value.
    std::vector<std::vector<Gate>> branches;

    static Gate x(std::size_t q);
    static Gate y(std::size_t q);
    static Gate z(std::size_t q);
    static Gate h(std::size_t q);
    static Gate s(std::size_t q);
    static Gate t(std::size_t q);
    static Gate rx(std::size_t q, double theta);
    static Gate ry(std::size_t q, double theta);
    static Gate rz(std::size_t q, double theta);
    static Gate phase(std::size_t q, double theta);
    static Gate cx(std::size_t control, std::size_t target);
    static Gate cz(std::size_t a, std::size_t b);
    static Gate cr(std::size_t control, std::size_t target, int m);
    static Gate swap(std::size_t a, std::size_t b);
    static Gate toffoli(std::size_t c1, std::size_t c2, std::size_t target);
    static Gate matrix(std::vector<std::size_t> qubits, qbound::Matrix u);
    static Gate controlled_block(std::vector<std::size_t> controls, std::vector<std::size_t> targets,
                                 std::vector<qbound::Matrix> blocks);
    static Gate classically_controlled(std::vector<std::size_t> wires, std::vector<std::vector<Gate>> branches);
    static Gate op(std::vector<std::size_t> qubits, std::vector<qbound::Matrix> operators,
                   std::vector<double> weights = {});

    std::size_t arity() const { return qubits.size(); }
    // ControlledBlock: number of control qubits.
    std::size_t num_controls() const;
    bool acts_on(std::size_t q) const;
    // Not classically controlled and not an operator insertion.
    bool is_unitary_kind() const;

    bool operator==(const Gate& other) const;
};

// Local matrix of a gate in operand order. For Operator gates with a single
// weight-1 operator the operator itself is returned. Throws std::invalid_argument
// for classically controlled gates and weighted operator sums.
qbound::Matrix gate_matrix(const Gate& gate);

enum class Prep { Free, Zero, One };

struct Measurement {
    std::size_t qubit = 0;
    std::size_t wire = 0;
    bool operator==(const Measurement&) const = default;
};

// Ordered gate list with per-qubit preparations and terminal computational-basis
// measurements. A measured qubit is read out after its last gate, so
// classically controlled gates may key on its wire once nothing acts on it anymore.
struct Circuit {
    std::size_t width = 0;
    std::vector<Prep> preparations;
    std::vector<Gate> gates;
    std::vector<Measurement> measurements;

    Circuit() = default;
    explicit Circuit(std::size_t width);

    Circuit& add(Gate g);
    Circuit& measure(std::size_t qubit, std::size_t wire);
    // Measures every qubit q into wire q.
    Circuit& measure_all();
    Circuit& prepare(std::size_t qubit, Prep p);

    std::size_t num_wires() const { return measurements.size(); }
    std::optional<std::size_t> wire_of(std::size_t qubit) const;
    std::optional<std::size_t> qubit_of_wire(std::size_t wire) const;
    bool is_measured(std::size_t qubit) const { return wire_of(qubit).has_value(); }
    std::size_t count_multi_qubit_gates() const;

    bool operator==(const Circuit& other) const = default;
};

struct Violation {
    // Position in the gate list, absent for circuit-level rules.
    std::optional<std::size_t> gate;
    std::string rule;
    std::string detail;

    std::string to_string() const;
};

// Empty iff every circuit and gate invariant holds.
std::vector<Violation> validate_circuit(const Circuit& circuit);

}  // namespace qbound
