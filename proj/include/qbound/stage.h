#pragma once

#include "qbound/caps.h"
#include "qbound/linalg.h"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace qbound {

enum class StageKind { Deterministic, Stochastic };

// Classical map on n-bit strings. It acts on the bit positions in `support`
// (ascending) and leaves every other bit alone. Local indices pack the support
// bits little-endian, support[0] being bit 0.
class ClassicalStage {
  public:
    static ClassicalStage identity(std::size_t width);
    // Full-width deterministic table, table[x] = f(x).
    static ClassicalStage deterministic(std::size_t width, std::vector<Index> table);
    // Local table over `positions` (any order; positions[j] is local bit j).
    static ClassicalStage deterministic_on(std::size_t width, std::vector<std::size_t> positions,
                                           std::vector<Index> local_table);
    // Column-stochastic matrix, column x is the distribution of outputs for input x.
    static ClassicalStage stochastic(std::size_t width, RealMatrix m, double tol = 1e-12);
    static ClassicalStage stochastic_on(std::size_t width, std::vector<std::size_t> positions, RealMatrix local,
                                        double tol = 1e-12);

    StageKind kind() const { return kind_; }
    std::size_t width() const { return width_; }
    const std::vector<std::size_t>& support() const { return support_; }
    const std::vector<Index>& local_table() const { return table_; }
    const RealMatrix& local_matrix() const { return matrix_; }

    // Deterministic only.
    Index map(Index x) const;
    // Output distribution for input x as (output, probability) pairs with probability > 0.
    std::vector<std::pair<Index, double>> column(Index x) const;

    // Full 2^n x 2^n matrix; width capped by caps.stochastic_qubits.
    RealMatrix to_dense(const Caps& caps = {}) const;
    // Local matrix on the support (0/1 lift for deterministic stages).
    RealMatrix local_dense() const;

    std::vector<double> apply(std::span<const double> probs) const;

    bool is_identity() const;
    bool is_bijection() const;

    bool operator==(const ClassicalStage& other) const;

  private:
    StageKind kind_ = StageKind::Deterministic;
    std::size_t width_ = 0;
    std::vector<std::size_t> support_;
    std::vector<Index> table_;
    RealMatrix matrix_;
};

// second ∘ first, i.e. matrix(second)·matrix(first).
// Throws std::invalid_argument on width mismatch, CapExceeded when the
// stochastic support union exceeds caps.stochastic_qubits.
ClassicalStage compose_stages(const ClassicalStage& first, const ClassicalStage& second, const Caps& caps = {});

// Removes the bit positions in `dropped` (both as inputs and outputs). Only
// possible when the kept outputs do not depend on the dropped inputs; the
// dropped outputs are marginalized. Returns nullopt otherwise.
std::optional<ClassicalStage> drop_bits(const ClassicalStage& stage, std::span<const std::size_t> dropped);

}  // namespace qbound
