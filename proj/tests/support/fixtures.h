#pragma once

#include "qbound/circuit.h"
#include "qbound/simulator.h"

#include <string>

namespace fixtures {

// H on q0, then CX(q0,q1), Z(q2), CX(q0,q2), CX(q0,q3); all measured.
qbound::Circuit example1();
// QFT on |0000>; every qubit prepared in |0>.
qbound::Circuit qft4();
// CX(q0,q1) followed by H on both; all measured.
qbound::Circuit example3();
// rz rx rz rewrite situation: ancilla q1 in |0>, V on q1, q1 controls U on q0, W on q1.
qbound::Circuit example2();
// Ancillas q0, q1 in |0>; system q2, q3 free. Measured wire k = qubit k.
qbound::Circuit si_example();
// Ancilla q1 coupled to q0 through a ZX exponential, then the SI pattern on (q1, q2).
qbound::Circuit gate_cut();
// q0 entangled coherently with q1 first; a wire cut on q0 after gate 3 exposes the SI pattern.
qbound::Circuit wire_cut();

inline constexpr std::size_t kGateCutIndex = 1;
inline constexpr std::size_t kWireCutQubit = 0;
inline constexpr std::size_t kWireCutPosition = 3;

// System state (α, β, γ, δ) over (x1, x2) with x1 the most significant digit,
// placed on q2 (x1) and q3 (x2) of the SI example; ancillas in |0>.
qbound::StateVector si_input(qbound::Complex alpha, qbound::Complex beta, qbound::Complex gamma,
                             qbound::Complex delta);

// Swaps entries 1 and 2 of a length-4 vector (two-bit reversal).
std::vector<double> reverse_two_bits(const std::vector<double>& v);

std::string fixture_path(const std::string& name);
qbound::Circuit load_fixture(const std::string& name);

}  // namespace fixtures
