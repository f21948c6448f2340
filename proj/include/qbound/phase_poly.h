#pragma once

#include "qbound/caps.h"
#include "qbound/circuit.h"
#include "qbound/linalg.h"

#include <optional>
#include <span>
#include <vector>

namespace qbound {

// U|x> = e^{i phase[x]} |perm[x]> on `width` qubits.
struct PhasePolyRep {
    std::size_t width = 0;
    std::vector<double> phase;
    std::vector<Index> perm;

    static PhasePolyRep identity(std::size_t width);
    // Reduces phases to [0, 2π); throws std::invalid_argument if perm is not a bijection.
    static PhasePolyRep make(std::size_t width, std::vector<double> phase, std::vector<Index> perm);

    bool is_bijection() const;
    bool perm_is_identity() const;
    bool phase_is_zero(double tol = 1e-9) const;
};

// Representation of a single gate in operand order, or nullopt when there is none.
std::optional<PhasePolyRep> gate_phase_poly(const Gate& gate);

// `first` acts first: (p1 + p2∘f1, f2∘f1).
PhasePolyRep compose_phase_poly(const PhasePolyRep& first, const PhasePolyRep& second);

// Identity extension of a local representation on `operands` to `support`
// (every operand must be in support; support is ascending).
PhasePolyRep embed_phase_poly(const PhasePolyRep& local, std::span<const std::size_t> operands,
                              std::span<const std::size_t> support);

// Folds the gates left to right starting from (0, x). Support must be ascending
// and contain every operand. Throws CapExceeded for support above caps.table_qubits.
std::optional<PhasePolyRep> segment_to_phase_poly(std::span<const Gate> gates, std::span<const std::size_t> support,
                                                  const Caps& caps = {});

// Dense matrix; throws CapExceeded above 12 qubits.
Matrix phase_poly_to_unitary(const PhasePolyRep& rep);

// (p, f) when every column has exactly one entry of modulus >= 1 - tol.
// Throws std::invalid_argument for non-unitary input.
std::optional<PhasePolyRep> incoherent_check(const Matrix& m, double tol = 1e-10);

}  // namespace qbound
