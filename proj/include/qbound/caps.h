#pragma once

#include <cstddef>

namespace qbound {

// Width limits for dense representations.
struct Caps {
    std::size_t statevector_qubits = 14;
    std::size_t density_qubits = 10;
    // Support of deterministic bit tables and phase-polynomial tables.
    std::size_t table_qubits = 16;
    // Support of dense stochastic matrices (4^k doubles).
    std::size_t stochastic_qubits = 10;
    // Number of simultaneously tracked simulation branches.
    std::size_t max_branches = 1 << 12;

    // Defaults overridden by QBOUND_SV_QUBITS, QBOUND_DM_QUBITS, QBOUND_TABLE_QUBITS,
    // QBOUND_STOCHASTIC_QUBITS when set.
    static Caps from_environment();
};

}  // namespace qbound
