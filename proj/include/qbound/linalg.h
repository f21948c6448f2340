#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qbound {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

// Basis-state index. Qubit k (0-based) is bit k, so the first qubit is the
// least significant digit.
using Index = std::uint64_t;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline int bit_of(Index x, std::size_t k) { return static_cast<int>((x >> k) & 1U); }

inline Index with_bit(Index x, std::size_t k, int value) {
    return value ? (x | (Index{1} << k)) : (x & ~(Index{1} << k));
}

// Gathers the bits of `x` at `positions` into a compact index (positions[j] -> bit j).
Index extract_bits(Index x, std::span<const std::size_t> positions);

// Writes the bits of `local` into `x` at `positions` (bit j -> positions[j]).
Index deposit_bits(Index x, Index local, std::span<const std::size_t> positions);

// log2 of a power of two; throws std::invalid_argument otherwise.
std::size_t log2_exact(std::size_t dim);

namespace linalg {

Matrix identity(std::size_t dim);
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix hadamard();
Matrix rx(double theta);
Matrix ry(double theta);
// diag(e^{iθ/2}, e^{-iθ/2})
Matrix rz(double theta);
// diag(1, e^{iθ})
Matrix phase(double theta);

// Tensor product where factors[0] acts on the least significant bits.
Matrix kron_lsb(const std::vector<Matrix>& factors);

// max |(U†U - 1)_ij|
double unitarity_defect(const Matrix& u);
bool is_unitary(const Matrix& u, double tol);
bool is_hermitian(const Matrix& a, double tol);
double max_abs_diff(const Matrix& a, const Matrix& b);

// Smallest max-entry distance between a and e^{iφ}·b over global phases φ
// (phase fixed by the largest entry of b).
double distance_up_to_global_phase(const Matrix& a, const Matrix& b);

// Reduces to [0, 2π).
double wrap_phase(double phi);

// |a - b| measured on the circle.
double phase_distance(double a, double b);

}  // namespace linalg
}  // namespace qbound
