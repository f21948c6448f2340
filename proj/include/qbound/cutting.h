#pragma once

#include "qbound/circuit.h"
#include "qbound/linalg.h"
#include "qbound/program.h"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qbound {

enum class CutKind { Horizontal, Vertical };

enum class InsertionRole { Identity, Pauli, Projector, Rotation, Observable, State };

std::string_view role_name(InsertionRole role);

// One summand of a quasi-probability decomposition.
// Horizontal: first = P_k (operand 0), second = Q_k (operand 1).
// Vertical: first = observable O_k, second = prepared state ρ_k.
struct CutTerm {
    double coeff = 0.0;
    Matrix first;
    Matrix second;
    CutKind kind = CutKind::Horizontal;
    std::array<InsertionRole, 2> roles{InsertionRole::Identity, InsertionRole::Identity};
};

// e^{iθ A1⊗A2} with A1 on the gate's first operand.
struct ExponentialForm {
    double theta = 0.0;
    Matrix a1;
    Matrix a2;
};

// Throws std::invalid_argument unless a1² = a2² = 1 (tol 1e-10).
std::vector<CutTerm> horizontal_cut_terms(double theta, const Matrix& a1, const Matrix& a2);
std::vector<CutTerm> vertical_cut_terms();

// Σ_k c_k (P_k⊗Q_k) ρ (P_k⊗Q_k)† for a two-qubit density matrix (P_k on the low qubit).
Matrix horizontal_channel_apply(std::span<const CutTerm> terms, const Matrix& rho);
// Σ_k d_k Tr(O_k ρ) ρ_k for a one-qubit density matrix.
Matrix vertical_reconstruct(std::span<const CutTerm> terms, const Matrix& rho);

double sampling_overhead(std::span<const CutTerm> terms);
// Σ_k coeffs[k]·values[k]; throws std::invalid_argument on length mismatch.
double recombine_expectation(std::span<const double> coeffs, std::span<const double> values);

Matrix exponential_matrix(const ExponentialForm& form);
// Finds θ and a Pauli pair with U = cos θ·1 + i sin θ·A1⊗A2 (tol 1e-10).
std::optional<ExponentialForm> extract_exponential(const Matrix& u);

struct CutVariant {
    double coeff = 0.0;
    Circuit circuit;
    // Vertical cuts: wire holding the O_k readout. Outcome 1 flips the sign unless O_k = 1.
    std::optional<std::size_t> sign_wire;
    bool signed_readout = false;
};

struct CutResult {
    CutKind kind = CutKind::Horizontal;
    std::vector<CutTerm> terms;
    std::vector<CutVariant> variants;
    // Gates before and after the cut location.
    Circuit prefix;
    Circuit suffix;
    std::optional<ExponentialForm> form;
};

// Replaces gate `index` by P_k and Q_k insertions. Without `form`, the gate
// matrix must be an exact Pauli exponential. Throws std::invalid_argument.
CutResult cut_gate(const Circuit& circuit, std::size_t index, std::optional<ExponentialForm> form = std::nullopt);

// Cuts `qubit` after the first `position` gates. The variant measures the old
// qubit in the O_k eigenbasis into a new wire and continues on a fresh qubit
// (index = width) prepared in ρ_k. Throws std::invalid_argument.
CutResult cut_wire(const Circuit& circuit, std::size_t qubit, std::size_t position);

// One evaluated variant: its distribution over output wires carrying `labels`.
struct VariantRun {
    double coeff = 0.0;
    std::vector<double> dist;
    std::vector<std::size_t> labels;
    // Label of the sign wire, when the readout is signed.
    std::optional<std::size_t> sign_label;
};

// Σ coeff·λ·dist marginalized onto `keep` (labels, in order).
std::vector<double> recombine_labelled(std::span<const VariantRun> runs, std::span<const std::size_t> keep);

}  // namespace qbound
