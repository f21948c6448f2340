#pragma once

#include "qbound/caps.h"
#include "qbound/circuit.h"
#include "qbound/program.h"
#include "qbound/stage.h"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qbound {

struct StateVector {
    std::size_t width = 0;
    Vector amplitudes;

    static StateVector basis(std::size_t width, Index index);
    double norm() const { return amplitudes.norm(); }
};

// Per-qubit tensor factors (factors[k] acts on qubit k) or one dense matrix.
struct Observable {
    std::vector<Matrix> factors;
    std::optional<Matrix> dense;

    static Observable product(std::vector<Matrix> factors);
    static Observable from_matrix(Matrix m);
    std::size_t width() const;
    Matrix to_dense() const;
};

struct KrausChannel {
    std::vector<Matrix> operators;
};

// Local matrix `u` applied to `qubits` (little-endian operand order) of every column of `m`.
void apply_local(Matrix& m, const Matrix& u, std::span<const std::size_t> qubits);
void apply_local(Vector& v, const Matrix& u, std::span<const std::size_t> qubits);

// Pure unitary evolution. Rejects classically controlled gates and operator insertions.
StateVector simulate_statevector(const Circuit& circuit, const BasisState& input, const Caps& caps = {});
StateVector simulate_statevector(const Circuit& circuit, const StateVector& input, const Caps& caps = {});

// Exact distribution over measured wires (index bit j = wire j). Classically
// controlled gates are expanded over all outcomes; operator insertions are
// summed with their weights, so the total may differ from 1 for such circuits.
std::vector<double> measurement_distribution(const Circuit& circuit, const BasisState& input, const Caps& caps = {});
std::vector<double> measurement_distribution(const Circuit& circuit, const StateVector& input, const Caps& caps = {});

// Final (unnormalized) density matrix, Σ_b w_b |ψ_b><ψ_b| over all branches.
Matrix final_density(const Circuit& circuit, const StateVector& input, const Caps& caps = {});

// Density-matrix evolution ρ -> (K…)ρ(K…)† including operator insertions; traces may drop below 1.
Matrix apply_operator_terms(const Circuit& circuit, const Matrix& rho, const Caps& caps = {});

double expectation_value(const StateVector& state, const Observable& obs);
double expectation_value(const Matrix& rho, const Observable& obs);

// Input bitstring with fixed preparations written in.
Index resolve_preparations(const Circuit& circuit, Index input);

std::vector<double> run_hybrid_exact(const HybridProgram& program, const BasisState& input, const Caps& caps = {});
// Requires the premap (if any) to act only on qubits with fixed preparations.
std::vector<double> run_hybrid_exact(const HybridProgram& program, const StateVector& input, const Caps& caps = {});

// Counts per output index. Deterministic for a given seed.
std::vector<std::uint64_t> sample_hybrid(const HybridProgram& program, const BasisState& input, std::uint64_t shots,
                                         std::uint64_t seed, const Caps& caps = {});

// M_ij = Σ_n |<i|K_n|j>|². Throws std::invalid_argument when Σ K†K != 1 (tol 1e-10).
// `warning` receives a message when some K_n or K_n† is not incoherent.
ClassicalStage kraus_to_stochastic(const KrausChannel& channel, std::string* warning = nullptr);

// Sums a distribution over wires down to the wires listed in `keep` (in that order).
std::vector<double> marginalize(std::span<const double> dist, std::size_t num_wires, std::span<const std::size_t> keep);

struct EquivalenceReport {
    std::vector<double> deviations;
    double max_deviation = 0.0;
    bool passed = true;
    // Wire labels compared.
    std::vector<std::size_t> compared_wires;
};

// Compares output distributions per input on the wire labels both sides expose.
EquivalenceReport equivalence_check(const HybridProgram& a, const HybridProgram& b,
                                    std::span<const BasisState> inputs, double tol, const Caps& caps = {});
EquivalenceReport equivalence_check(const HybridProgram& a, const HybridProgram& b,
                                    std::span<const StateVector> inputs, double tol, const Caps& caps = {});

// Haar-random pure state from normalized complex Gaussians.
StateVector random_state(std::size_t width, std::uint64_t seed);
// Random mixed state ρ = G G† / tr(G G†) with G a complex Gaussian matrix.
Matrix random_density(std::size_t width, std::uint64_t seed);

// Uniform double in [0, 1) from a 64-bit engine output (top 53 bits).
inline double unit_from_bits(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

}  // namespace qbound
