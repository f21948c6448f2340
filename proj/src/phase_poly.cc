#include "qbound/phase_poly.h"

#include "qbound/errors.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qbound {

namespace {

constexpr std::size_t kUnitaryCap = 12;

PhasePolyRep table(std::size_t width, auto phase_fn, auto perm_fn) {
    const Index dim = Index{1} << width;
    std::vector<double> p(dim);
    std::vector<Index> f(dim);
    for (Index x = 0; x < dim; ++x) {
        p[x] = phase_fn(x);
        f[x] = perm_fn(x);
    }
    return PhasePolyRep::make(width, std::move(p), std::move(f));
}

double b(Index x, std::size_t k) { return static_cast<double>(bit_of(x, k)); }

}  // namespace

PhasePolyRep PhasePolyRep::identity(std::size_t width) {
    return table(width, [](Index) { return 0.0; }, [](Index x) { return x; });
}

PhasePolyRep PhasePolyRep::make(std::size_t width, std::vector<double> phase, std::vector<Index> perm) {
    const Index dim = Index{1} << width;
    if (phase.size() != dim || perm.size() != dim) {
        throw std::invalid_argument("phase polynomial tables need 2^width entries");
    }
    PhasePolyRep r;
    r.width = width;
    r.phase = std::move(phase);
    r.perm = std::move(perm);
    for (double& v : r.phase) {
        v = linalg::wrap_phase(v);
    }
    if (!r.is_bijection()) {
        throw std::invalid_argument("basis transformation is not a bijection");
    }
    return r;
}

bool PhasePolyRep::is_bijection() const {
    std::vector<bool> hit(perm.size(), false);
    for (Index y : perm) {
        if (y >= perm.size() || hit[y]) {
            return false;
        }
        hit[y] = true;
    }
    return true;
}

bool PhasePolyRep::perm_is_identity() const {
    for (Index x = 0; x < perm.size(); ++x) {
        if (perm[x] != x) {
            return false;
        }
    }
    return true;
}

bool PhasePolyRep::phase_is_zero(double tol) const {
    return std::all_of(phase.begin(), phase.end(), [tol](double p) { return linalg::phase_distance(p, 0.0) <= tol; });
}

std::optional<PhasePolyRep> gate_phase_poly(const Gate& g) {
    const double theta = g.angle;
    switch (g.kind) {
        case GateKind::X:
            return table(1, [](Index) { return 0.0; }, [](Index x) { return x ^ 1U; });
        case GateKind::Y:
            return table(1, [](Index x) { return kPi * b(x, 0); }, [](Index x) { return x ^ 1U; });
        case GateKind::Z:
            return table(1, [](Index x) { return kPi * b(x, 0); }, [](Index x) { return x; });
        case GateKind::S:
            return table(1, [](Index x) { return kPi / 2 * b(x, 0); }, [](Index x) { return x; });
        case GateKind::T:
            return table(1, [](Index x) { return kPi / 4 * b(x, 0); }, [](Index x) { return x; });
        case GateKind::RZ:
            return table(1, [theta](Index x) { return theta / 2 - theta * b(x, 0); }, [](Index x) { return x; });
        case GateKind::Phase:
            return table(1, [theta](Index x) { return theta * b(x, 0); }, [](Index x) { return x; });
        case GateKind::CX:
            return table(2, [](Index) { return 0.0; }, [](Index x) { return x ^ ((x & 1U) << 1); });
        case GateKind::CZ:
            return table(2, [](Index x) { return kPi * b(x, 0) * b(x, 1); }, [](Index x) { return x; });
        case GateKind::CR: {
            const double angle = kTwoPi / std::ldexp(1.0, g.order);
            return table(2, [angle](Index x) { return angle * b(x, 0) * b(x, 1); }, [](Index x) { return x; });
        }
        case GateKind::Swap:
            return table(2, [](Index) { return 0.0; },
                         [](Index x) { return (x & ~Index{3}) | ((x & 1U) << 1) | ((x >> 1) & 1U); });
        case GateKind::Toffoli:
            return table(3, [](Index) { return 0.0; }, [](Index x) { return ((x & 3U) == 3U) ? (x ^ 4U) : x; });
        case GateKind::Matrix:
        case GateKind::ControlledBlock:
            try {
                return incoherent_check(gate_matrix(g), 1e-10);
            } catch (const std::invalid_argument&) {
                return std::nullopt;
            }
        case GateKind::H:
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::ClassicallyControlled:
        case GateKind::Operator:
            return std::nullopt;
    }
    return std::nullopt;
}

PhasePolyRep compose_phase_poly(const PhasePolyRep& first, const PhasePolyRep& second) {
    if (first.width != second.width) {
        throw std::invalid_argument("compose_phase_poly: width " + std::to_string(first.width) + " vs " +
                                    std::to_string(second.width));
    }
    const Index dim = Index{1} << first.width;
    std::vector<double> p(dim);
    std::vector<Index> f(dim);
    for (Index x = 0; x < dim; ++x) {
        const Index y = first.perm[x];
        p[x] = first.phase[x] + second.phase[y];
        f[x] = second.perm[y];
    }
    return PhasePolyRep::make(first.width, std::move(p), std::move(f));
}

PhasePolyRep embed_phase_poly(const PhasePolyRep& local, std::span<const std::size_t> operands,
                              std::span<const std::size_t> support) {
    if (local.width != operands.size()) {
        throw std::invalid_argument("embed_phase_poly: operand count does not match representation width");
    }
    std::vector<std::size_t> pos(operands.size());
    for (std::size_t j = 0; j < operands.size(); ++j) {
        const auto it = std::find(support.begin(), support.end(), operands[j]);
        if (it == support.end()) {
            throw std::invalid_argument("embed_phase_poly: operand " + std::to_string(operands[j]) +
                                        " outside support");
        }
        pos[j] = static_cast<std::size_t>(it - support.begin());
    }
    const Index dim = Index{1} << support.size();
    std::vector<double> p(dim);
    std::vector<Index> f(dim);
    for (Index x = 0; x < dim; ++x) {
        const Index l = extract_bits(x, pos);
        p[x] = local.phase[l];
        f[x] = deposit_bits(x, local.perm[l], pos);
    }
    return PhasePolyRep::make(support.size(), std::move(p), std::move(f));
}

std::optional<PhasePolyRep> segment_to_phase_poly(std::span<const Gate> gates, std::span<const std::size_t> support,
                                                  const Caps& caps) {
    if (support.size() > caps.table_qubits) {
        throw CapExceeded("phase polynomial support", support.size(), caps.table_qubits);
    }
    if (!std::is_sorted(support.begin(), support.end()) ||
        std::adjacent_find(support.begin(), support.end()) != support.end()) {
        throw std::invalid_argument("segment support must be strictly ascending");
    }
    PhasePolyRep acc = PhasePolyRep::identity(support.size());
    for (const Gate& g : gates) {
        const auto local = gate_phase_poly(g);
        if (!local) {
            return std::nullopt;
        }
        acc = compose_phase_poly(acc, embed_phase_poly(*local, g.qubits, support));
    }
    return acc;
}

Matrix phase_poly_to_unitary(const PhasePolyRep& rep) {
    if (rep.width > kUnitaryCap) {
        throw CapExceeded("phase polynomial unitary", rep.width, kUnitaryCap);
    }
    const auto dim = static_cast<Eigen::Index>(rep.perm.size());
    Matrix u = Matrix::Zero(dim, dim);
    for (Eigen::Index x = 0; x < dim; ++x) {
        u(static_cast<Eigen::Index>(rep.perm[static_cast<std::size_t>(x)]), x) =
            std::polar(1.0, rep.phase[static_cast<std::size_t>(x)]);
    }
    return u;
}

std::optional<PhasePolyRep> incoherent_check(const Matrix& m, double tol) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument("incoherent_check: matrix must be square");
    }
    if (!linalg::is_unitary(m, tol)) {
        throw std::invalid_argument("incoherent_check: matrix is not unitary");
    }
    const std::size_t width = log2_exact(static_cast<std::size_t>(m.rows()));
    std::vector<double> p(static_cast<std::size_t>(m.cols()));
    std::vector<Index> f(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        Eigen::Index hit = -1;
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            if (std::abs(m(r, c)) >= 1.0 - tol) {
                if (hit >= 0) {
                    return std::nullopt;
                }
                hit = r;
            }
        }
        if (hit < 0) {
            return std::nullopt;
        }
        p[static_cast<std::size_t>(c)] = std::arg(m(hit, c));
        f[static_cast<std::size_t>(c)] = static_cast<Index>(hit);
    }
    PhasePolyRep rep;
    try {
        rep = PhasePolyRep::make(width, std::move(p), std::move(f));
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
    if (linalg::max_abs_diff(phase_poly_to_unitary(rep), m) > tol) {
        return std::nullopt;
    }
    return rep;
}

}  // namespace qbound
