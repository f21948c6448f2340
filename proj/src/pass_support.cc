#include "pass_internal.h"

#include "qbound/errors.h"
#include "qbound/phase_poly.h"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace qbound::detail {

std::vector<std::optional<int>> known_constant_bits(const Circuit& c, const ClassicalStage* premap, const Caps& caps) {
    std::vector<std::optional<int>> out(c.width);
    for (std::size_t q = 0; q < c.width; ++q) {
        if (c.preparations[q] == Prep::Zero) {
            out[q] = 0;
        } else if (c.preparations[q] == Prep::One) {
            out[q] = 1;
        }
    }
    if (premap == nullptr) {
        return out;
    }
    const auto& support = premap->support();
    std::vector<std::size_t> free_bits;
    for (std::size_t q : support) {
        if (!out[q]) {
            free_bits.push_back(q);
        }
    }
    if (free_bits.size() > caps.table_qubits) {
        for (std::size_t q : support) {
            out[q].reset();
        }
        return out;
    }
    Index base = 0;
    for (std::size_t q = 0; q < c.width; ++q) {
        if (out[q]) {
            base = with_bit(base, q, *out[q]);
        }
    }
    std::vector<int> seen(c.width, -1);
    std::vector<bool> varies(c.width, false);
    for (Index v = 0; v < (Index{1} << free_bits.size()); ++v) {
        for (const auto& [y, p] : premap->column(deposit_bits(base, v, free_bits))) {
            (void)p;
            for (std::size_t q : support) {
                const int b = bit_of(y, q);
                if (seen[q] < 0) {
                    seen[q] = b;
                } else if (seen[q] != b) {
                    varies[q] = true;
                }
            }
        }
    }
    for (std::size_t q : support) {
        if (varies[q] || seen[q] < 0) {
            out[q].reset();
        } else {
            out[q] = seen[q];
        }
    }
    return out;
}

bool basis_prepared(const Circuit& c, std::size_t q, const PassContext& ctx) {
    return c.preparations[q] != Prep::Free || ctx.basis_inputs;
}

bool used_after(const Circuit& c, std::size_t q, std::size_t gate) { return next_use(c, q, gate).has_value(); }

bool used_before(const Circuit& c, std::size_t q, std::size_t gate) { return prev_use(c, q, gate).has_value(); }

std::optional<std::size_t> next_use(const Circuit& c, std::size_t q, std::size_t gate) {
    for (std::size_t j = gate + 1; j < c.gates.size(); ++j) {
        if (c.gates[j].acts_on(q)) {
            return j;
        }
    }
    return std::nullopt;
}

std::optional<std::size_t> prev_use(const Circuit& c, std::size_t q, std::size_t gate) {
    for (std::size_t j = std::min(gate, c.gates.size()); j-- > 0;) {
        if (c.gates[j].acts_on(q)) {
            return j;
        }
    }
    return std::nullopt;
}

Circuit without_gates(const Circuit& c, const std::vector<bool>& remove) {
    Circuit out = c;
    out.gates.clear();
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        if (!remove[i]) {
            out.gates.push_back(c.gates[i]);
        }
    }
    return out;
}

Circuit drop_wires(const Circuit& c, const std::vector<std::size_t>& wires) {
    const std::set<std::size_t> dropped(wires.begin(), wires.end());
    std::vector<std::size_t> renumber(c.num_wires(), 0);
    std::size_t next = 0;
    for (std::size_t w = 0; w < c.num_wires(); ++w) {
        if (!dropped.count(w)) {
            renumber[w] = next++;
        }
    }
    Circuit out = c;
    out.measurements.clear();
    for (const Measurement& m : c.measurements) {
        if (!dropped.count(m.wire)) {
            out.measurements.push_back({m.qubit, renumber[m.wire]});
        }
    }
    for (Gate& g : out.gates) {
        if (g.kind != GateKind::ClassicallyControlled) {
            continue;
        }
        for (std::size_t& w : g.wires) {
            if (dropped.count(w)) {
                throw std::logic_error("drop_wires: a remaining gate still reads a dropped wire");
            }
            w = renumber[w];
        }
    }
    return out;
}

void finalize(PassResult& r, const Circuit& before, const std::string& rule) {
    r.report.rule = rule;
    r.report.gates_before = before.gates.size();
    r.report.gates_after = r.circuit.gates.size();
    r.report.gates_removed =
        r.report.gates_before > r.report.gates_after ? r.report.gates_before - r.report.gates_after : 0;
    r.report.multi_qubit_after = r.circuit.count_multi_qubit_gates();
    r.report.stages_added = (r.premap ? 1 : 0) + (r.post_stage ? 1 : 0);
}

std::vector<ControlSplit> control_splits(const Gate& g) {
    const auto& q = g.qubits;
    auto one = [](Gate inner) { return std::vector<Gate>{std::move(inner)}; };
    switch (g.kind) {
        case GateKind::CX:
            return {{{q[0]}, {{}, one(Gate::x(q[1]))}}};
        case GateKind::Toffoli:
            return {{{q[0], q[1]}, {{}, {}, {}, one(Gate::x(q[2]))}}};
        case GateKind::CZ:
            return {{{q[0]}, {{}, one(Gate::z(q[1]))}}, {{q[1]}, {{}, one(Gate::z(q[0]))}}};
        case GateKind::CR: {
            const double angle = kTwoPi / std::ldexp(1.0, g.order);
            return {{{q[0]}, {{}, one(Gate::phase(q[1], angle))}}, {{q[1]}, {{}, one(Gate::phase(q[0], angle))}}};
        }
        case GateKind::ControlledBlock: {
            const std::size_t c = g.num_controls();
            ControlSplit s;
            s.controls.assign(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(c));
            const std::vector<std::size_t> targets(q.begin() + static_cast<std::ptrdiff_t>(c), q.end());
            for (const Matrix& u : g.payload) {
                if (is_identity_up_to_phase(u)) {
                    s.branches.emplace_back();
                } else {
                    s.branches.push_back(one(Gate::matrix(targets, u)));
                }
            }
            return {s};
        }
        default:
            return {};
    }
}

bool diagonal_on(const Gate& g, std::size_t q) {
    if (!g.acts_on(q)) {
        return true;
    }
    switch (g.kind) {
        case GateKind::Z:
        case GateKind::S:
        case GateKind::T:
        case GateKind::RZ:
        case GateKind::Phase:
        case GateKind::CZ:
        case GateKind::CR:
            return true;
        case GateKind::CX:
            return g.qubits[0] == q;
        case GateKind::Toffoli:
            return g.qubits[0] == q || g.qubits[1] == q;
        case GateKind::ControlledBlock: {
            const std::size_t c = g.num_controls();
            for (std::size_t j = 0; j < c; ++j) {
                if (g.qubits[j] == q) {
                    return true;
                }
            }
            return false;
        }
        case GateKind::Matrix: {
            const auto rep = gate_phase_poly(g);
            return rep && rep->perm_is_identity();
        }
        default:
            return false;
    }
}

bool is_identity_up_to_phase(const Matrix& u, double tol) {
    return linalg::distance_up_to_global_phase(u, Matrix::Identity(u.rows(), u.cols())) <= tol;
}

std::size_t count_coherent_single_qubit(const Circuit& c) {
    std::size_t n = 0;
    for (const Gate& g : c.gates) {
        if (g.qubits.size() == 1 && g.is_unitary_kind() && g.kind != GateKind::RX && !gate_phase_poly(g)) {
            ++n;
        }
    }
    return n;
}

}  // namespace qbound::detail
