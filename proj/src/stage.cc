#include "qbound/stage.h"

#include "qbound/errors.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qbound {

namespace {

constexpr double kComposeTol = 1e-9;

void check_positions(std::size_t width, const std::vector<std::size_t>& positions) {
    if (width > 62) {
        throw std::invalid_argument("stage width above 62 bits");
    }
    std::vector<bool> seen(width, false);
    for (std::size_t p : positions) {
        if (p >= width) {
            throw std::invalid_argument("stage position " + std::to_string(p) + " outside width " +
                                        std::to_string(width));
        }
        if (seen[p]) {
            throw std::invalid_argument("duplicate stage position " + std::to_string(p));
        }
        seen[p] = true;
    }
}

// rank[j] = index of positions[j] in sorted order.
std::vector<std::size_t> sort_ranks(const std::vector<std::size_t>& positions, std::vector<std::size_t>& sorted) {
    sorted = positions;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> rank(positions.size());
    for (std::size_t j = 0; j < positions.size(); ++j) {
        rank[j] = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), positions[j]) - sorted.begin());
    }
    return rank;
}

// Local index in `positions` order -> local index in sorted order.
Index to_sorted(Index local, const std::vector<std::size_t>& rank) {
    Index out = 0;
    for (std::size_t j = 0; j < rank.size(); ++j) {
        out |= static_cast<Index>(bit_of(local, j)) << rank[j];
    }
    return out;
}

void check_stochastic(const RealMatrix& m, double tol) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        double sum = 0.0;
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            const double v = m(r, c);
            if (!(v >= -tol && v <= 1.0 + tol)) {
                throw std::invalid_argument("stochastic entry (" + std::to_string(r) + ", " + std::to_string(c) +
                                            ") outside [0, 1]");
            }
            sum += v;
        }
        if (!(std::abs(sum - 1.0) <= tol)) {
            throw std::invalid_argument("stochastic column " + std::to_string(c) + " sums to " +
                                        std::to_string(sum));
        }
    }
}

// Stage restricted to the bit positions in `u` (a superset of its support).
RealMatrix lift(const ClassicalStage& s, const std::vector<std::size_t>& u) {
    const Index dim = Index{1} << u.size();
    RealMatrix m = RealMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (Index l = 0; l < dim; ++l) {
        const Index x = deposit_bits(0, l, u);
        for (const auto& [y, w] : s.column(x)) {
            m(static_cast<Eigen::Index>(extract_bits(y, u)), static_cast<Eigen::Index>(l)) += w;
        }
    }
    return m;
}

}  // namespace

ClassicalStage ClassicalStage::identity(std::size_t width) {
    check_positions(width, {});
    ClassicalStage s;
    s.kind_ = StageKind::Deterministic;
    s.width_ = width;
    s.table_ = {0};
    return s;
}

ClassicalStage ClassicalStage::deterministic(std::size_t width, std::vector<Index> table) {
    std::vector<std::size_t> all(width);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return deterministic_on(width, std::move(all), std::move(table));
}

ClassicalStage ClassicalStage::deterministic_on(std::size_t width, std::vector<std::size_t> positions,
                                                std::vector<Index> local_table) {
    check_positions(width, positions);
    const Index dim = Index{1} << positions.size();
    if (local_table.size() != dim) {
        throw std::invalid_argument("deterministic table needs " + std::to_string(dim) + " entries");
    }
    for (Index y : local_table) {
        if (y >= dim) {
            throw std::invalid_argument("deterministic table entry " + std::to_string(y) + " out of range");
        }
    }
    ClassicalStage s;
    s.kind_ = StageKind::Deterministic;
    s.width_ = width;
    const std::vector<std::size_t> rank = sort_ranks(positions, s.support_);
    s.table_.assign(dim, 0);
    for (Index l = 0; l < dim; ++l) {
        s.table_[to_sorted(l, rank)] = to_sorted(local_table[l], rank);
    }
    return s;
}

ClassicalStage ClassicalStage::stochastic(std::size_t width, RealMatrix m, double tol) {
    std::vector<std::size_t> all(width);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return stochastic_on(width, std::move(all), std::move(m), tol);
}

ClassicalStage ClassicalStage::stochastic_on(std::size_t width, std::vector<std::size_t> positions, RealMatrix local,
                                             double tol) {
    check_positions(width, positions);
    const auto dim = static_cast<Eigen::Index>(Index{1} << positions.size());
    if (local.rows() != dim || local.cols() != dim) {
        throw std::invalid_argument("stochastic matrix must be " + std::to_string(dim) + "x" + std::to_string(dim));
    }
    check_stochastic(local, tol);
    ClassicalStage s;
    s.kind_ = StageKind::Stochastic;
    s.width_ = width;
    const std::vector<std::size_t> rank = sort_ranks(positions, s.support_);
    s.matrix_ = RealMatrix::Zero(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            s.matrix_(static_cast<Eigen::Index>(to_sorted(static_cast<Index>(r), rank)),
                      static_cast<Eigen::Index>(to_sorted(static_cast<Index>(c), rank))) = local(r, c);
        }
    }
    return s;
}

Index ClassicalStage::map(Index x) const {
    if (kind_ != StageKind::Deterministic) {
        throw std::logic_error("map() on a stochastic stage");
    }
    return deposit_bits(x, table_[extract_bits(x, support_)], support_);
}

std::vector<std::pair<Index, double>> ClassicalStage::column(Index x) const {
    if (kind_ == StageKind::Deterministic) {
        return {{map(x), 1.0}};
    }
    std::vector<std::pair<Index, double>> out;
    const auto l = static_cast<Eigen::Index>(extract_bits(x, support_));
    for (Eigen::Index r = 0; r < matrix_.rows(); ++r) {
        if (matrix_(r, l) > 0.0) {
            out.emplace_back(deposit_bits(x, static_cast<Index>(r), support_), matrix_(r, l));
        }
    }
    return out;
}

RealMatrix ClassicalStage::to_dense(const Caps& caps) const {
    if (width_ > caps.stochastic_qubits) {
        throw CapExceeded("dense stage", width_, caps.stochastic_qubits);
    }
    std::vector<std::size_t> all(width_);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return lift(*this, all);
}

RealMatrix ClassicalStage::local_dense() const {
    if (kind_ == StageKind::Stochastic) {
        return matrix_;
    }
    const auto dim = static_cast<Eigen::Index>(table_.size());
    RealMatrix m = RealMatrix::Zero(dim, dim);
    for (Eigen::Index l = 0; l < dim; ++l) {
        m(static_cast<Eigen::Index>(table_[static_cast<std::size_t>(l)]), l) = 1.0;
    }
    return m;
}

std::vector<double> ClassicalStage::apply(std::span<const double> probs) const {
    const Index dim = Index{1} << width_;
    if (probs.size() != dim) {
        throw std::invalid_argument("stage of width " + std::to_string(width_) + " applied to vector of length " +
                                    std::to_string(probs.size()));
    }
    std::vector<double> out(dim, 0.0);
    for (Index x = 0; x < dim; ++x) {
        if (probs[x] == 0.0) {
            continue;
        }
        for (const auto& [y, w] : column(x)) {
            out[y] += probs[x] * w;
        }
    }
    return out;
}

bool ClassicalStage::is_identity() const {
    if (kind_ == StageKind::Deterministic) {
        for (std::size_t l = 0; l < table_.size(); ++l) {
            if (table_[l] != l) {
                return false;
            }
        }
        return true;
    }
    return (matrix_ - RealMatrix::Identity(matrix_.rows(), matrix_.cols())).cwiseAbs().maxCoeff() <= 1e-12;
}

bool ClassicalStage::is_bijection() const {
    if (kind_ == StageKind::Deterministic) {
        std::vector<bool> hit(table_.size(), false);
        for (Index y : table_) {
            if (hit[y]) {
                return false;
            }
            hit[y] = true;
        }
        return true;
    }
    for (Eigen::Index c = 0; c < matrix_.cols(); ++c) {
        for (Eigen::Index r = 0; r < matrix_.rows(); ++r) {
            const double v = matrix_(r, c);
            if (v != 0.0 && v != 1.0) {
                return false;
            }
        }
    }
    for (Eigen::Index r = 0; r < matrix_.rows(); ++r) {
        if (matrix_.row(r).sum() != 1.0) {
            return false;
        }
    }
    return true;
}

bool ClassicalStage::operator==(const ClassicalStage& other) const {
    if (kind_ != other.kind_ || width_ != other.width_ || support_ != other.support_) {
        return false;
    }
    if (kind_ == StageKind::Deterministic) {
        return table_ == other.table_;
    }
    return matrix_.rows() == other.matrix_.rows() && matrix_ == other.matrix_;
}

ClassicalStage compose_stages(const ClassicalStage& first, const ClassicalStage& second, const Caps& caps) {
    if (first.width() != second.width()) {
        throw std::invalid_argument("compose_stages: width " + std::to_string(first.width()) + " vs " +
                                    std::to_string(second.width()));
    }
    std::vector<std::size_t> u = first.support();
    u.insert(u.end(), second.support().begin(), second.support().end());
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());

    if (first.kind() == StageKind::Deterministic && second.kind() == StageKind::Deterministic) {
        if (u.size() > caps.table_qubits) {
            throw CapExceeded("composed bit table", u.size(), caps.table_qubits);
        }
        const Index dim = Index{1} << u.size();
        std::vector<Index> table(dim);
        for (Index l = 0; l < dim; ++l) {
            table[l] = extract_bits(second.map(first.map(deposit_bits(0, l, u))), u);
        }
        return ClassicalStage::deterministic_on(first.width(), u, std::move(table));
    }
    if (u.size() > caps.stochastic_qubits) {
        throw CapExceeded("composed stochastic stage", u.size(), caps.stochastic_qubits);
    }
    RealMatrix m = lift(second, u) * lift(first, u);
    return ClassicalStage::stochastic_on(first.width(), u, std::move(m), kComposeTol);
}

std::optional<ClassicalStage> drop_bits(const ClassicalStage& stage, std::span<const std::size_t> dropped) {
    const std::size_t width = stage.width();
    std::vector<bool> is_dropped(width, false);
    for (std::size_t d : dropped) {
        if (d >= width) {
            throw std::invalid_argument("drop_bits: position out of range");
        }
        is_dropped[d] = true;
    }
    std::vector<std::size_t> new_pos(width, 0);
    std::size_t next = 0;
    for (std::size_t p = 0; p < width; ++p) {
        if (!is_dropped[p]) {
            new_pos[p] = next++;
        }
    }
    const std::size_t new_width = next;

    const auto& support = stage.support();
    std::vector<std::size_t> keep;
    std::vector<std::size_t> drop;
    for (std::size_t p : support) {
        (is_dropped[p] ? drop : keep).push_back(p);
    }
    std::vector<std::size_t> mapped;
    for (std::size_t p : keep) {
        mapped.push_back(new_pos[p]);
    }
    if (drop.empty()) {
        if (stage.kind() == StageKind::Deterministic) {
            return ClassicalStage::deterministic_on(new_width, mapped, stage.local_table());
        }
        return ClassicalStage::stochastic_on(new_width, mapped, stage.local_matrix(), kComposeTol);
    }

    // Kept outputs must not depend on the dropped inputs.
    const Index keep_dim = Index{1} << keep.size();
    const Index drop_dim = Index{1} << drop.size();
    RealMatrix local = RealMatrix::Zero(static_cast<Eigen::Index>(keep_dim), static_cast<Eigen::Index>(keep_dim));
    for (Index a = 0; a < keep_dim; ++a) {
        for (Index d = 0; d < drop_dim; ++d) {
            const Index x = deposit_bits(deposit_bits(0, a, keep), d, drop);
            std::vector<double> col(keep_dim, 0.0);
            for (const auto& [y, w] : stage.column(x)) {
                col[extract_bits(y, keep)] += w;
            }
            for (Index b = 0; b < keep_dim; ++b) {
                if (d == 0) {
                    local(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = col[b];
                } else if (std::abs(local(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) - col[b]) > 1e-12) {
                    return std::nullopt;
                }
            }
        }
    }
    if (stage.kind() == StageKind::Deterministic) {
        std::vector<Index> table(keep_dim);
        for (Index a = 0; a < keep_dim; ++a) {
            for (Index b = 0; b < keep_dim; ++b) {
                if (local(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) == 1.0) {
                    table[a] = b;
                }
            }
        }
        return ClassicalStage::deterministic_on(new_width, mapped, std::move(table));
    }
    return ClassicalStage::stochastic_on(new_width, mapped, std::move(local), kComposeTol);
}

}  // namespace qbound
