#include "qbound/linalg.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qbound {

Index extract_bits(Index x, std::span<const std::size_t> positions) {
    Index out = 0;
    for (std::size_t j = 0; j < positions.size(); ++j) {
        out |= static_cast<Index>(bit_of(x, positions[j])) << j;
    }
    return out;
}

Index deposit_bits(Index x, Index local, std::span<const std::size_t> positions) {
    for (std::size_t j = 0; j < positions.size(); ++j) {
        x = with_bit(x, positions[j], bit_of(local, j));
    }
    return x;
}

std::size_t log2_exact(std::size_t dim) {
    if (dim == 0 || (dim & (dim - 1)) != 0) {
        throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
    }
    std::size_t k = 0;
    while ((std::size_t{1} << k) < dim) {
        ++k;
    }
    return k;
}

namespace linalg {

Matrix identity(std::size_t dim) {
    return Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_y() {
    Matrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Matrix hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    Matrix m(2, 2);
    m << s, s, s, -s;
    return m;
}

Matrix rx(double theta) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    Matrix m(2, 2);
    m << c, Complex(0, -s), Complex(0, -s), c;
    return m;
}

Matrix ry(double theta) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    Matrix m(2, 2);
    m << c, -s, s, c;
    return m;
}

Matrix rz(double theta) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = std::polar(1.0, theta / 2);
    m(1, 1) = std::polar(1.0, -theta / 2);
    return m;
}

Matrix phase(double theta) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1;
    m(1, 1) = std::polar(1.0, theta);
    return m;
}

Matrix kron_lsb(const std::vector<Matrix>& factors) {
    Matrix out = Matrix::Identity(1, 1);
    for (const Matrix& f : factors) {
        // New factor occupies the more significant bits.
        Matrix next(f.rows() * out.rows(), f.cols() * out.cols());
        for (Eigen::Index i = 0; i < f.rows(); ++i) {
            for (Eigen::Index j = 0; j < f.cols(); ++j) {
                next.block(i * out.rows(), j * out.cols(), out.rows(), out.cols()) = f(i, j) * out;
            }
        }
        out = std::move(next);
    }
    return out;
}

double unitarity_defect(const Matrix& u) {
    if (u.rows() != u.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    const Matrix d = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
    return d.cwiseAbs().maxCoeff();
}

bool is_unitary(const Matrix& u, double tol) { return unitarity_defect(u) <= tol; }

bool is_hermitian(const Matrix& a, double tol) {
    return a.rows() == a.cols() && (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    if (a.size() == 0) {
        return 0.0;
    }
    return (a - b).cwiseAbs().maxCoeff();
}

double distance_up_to_global_phase(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    b.cwiseAbs().maxCoeff(&r, &c);
    if (std::abs(b(r, c)) == 0.0 || std::abs(a(r, c)) == 0.0) {
        return max_abs_diff(a, b);
    }
    const Complex rel = a(r, c) / b(r, c);
    return max_abs_diff(a, b * (rel / std::abs(rel)));
}

double wrap_phase(double phi) {
    double r = std::fmod(phi, kTwoPi);
    if (r < 0) {
        r += kTwoPi;
    }
    if (r >= kTwoPi) {
        r = 0.0;
    }
    return r;
}

double phase_distance(double a, double b) {
    const double d = wrap_phase(a - b);
    return std::min(d, kTwoPi - d);
}

}  // namespace linalg
}  // namespace qbound
